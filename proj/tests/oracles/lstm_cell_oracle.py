"""Scalar single-step LSTM oracle for the fixture in test_network.cpp.

Gate order in the stacked weights: input, forget, cell candidate, output.
"""
import math

H = 2
x = [0.5, -0.3]
h_prev = [0.1, -0.2]
c_prev = [0.05, 0.3]
W = [[0.2, -0.1], [0.05, 0.3], [-0.4, 0.1], [0.25, 0.2],
     [0.1, 0.1], [-0.3, 0.45], [0.15, -0.2], [0.35, -0.05]]
U = [[0.1, 0.2], [-0.1, 0.05], [0.3, -0.2], [0.0, 0.15],
     [-0.25, 0.1], [0.2, 0.2], [0.05, -0.35], [-0.1, 0.3]]
b = [0.01, -0.02, 0.5, 0.4, 0.0, 0.03, -0.1, 0.2]


def sigmoid(v):
    return 1.0 / (1.0 + math.exp(-v))


z = []
for r in range(4 * H):
    acc = b[r]
    for k in range(len(x)):
        acc += W[r][k] * x[k]
    for k in range(H):
        acc += U[r][k] * h_prev[k]
    z.append(acc)

h, c = [], []
for j in range(H):
    i = sigmoid(z[j])
    f = sigmoid(z[H + j])
    g = math.tanh(z[2 * H + j])
    o = sigmoid(z[3 * H + j])
    cj = f * c_prev[j] + i * g
    c.append(cj)
    h.append(o * math.tanh(cj))

print("h =", [repr(v) for v in h])
print("c =", [repr(v) for v in c])

# single Adam step, theta=1, g=0.5
m = 0.1 * 0.5
v = 0.001 * 0.25
mh = m / (1 - 0.9)
vh = v / (1 - 0.999)
theta1 = 1 - 0.001 * mh / (math.sqrt(vh) + 1e-8)
print("adam1 =", repr(theta1))
m2 = 0.9 * m + 0.1 * 0.5
v2 = 0.999 * v + 0.001 * 0.25
theta2 = theta1 - 0.001 * (m2 / (1 - 0.81)) / (math.sqrt(v2 / (1 - 0.999**2)) + 1e-8)
print("adam2 =", repr(theta2), "step1", repr(1 - theta1), "step2", repr(theta1 - theta2))
print("bce =", repr(-(math.log(0.9) + math.log(0.8)) / 2))
