"""Independent scalar evaluations used to freeze regression constants in the C++ tests."""
from mpmath import mp, mpf, sqrt, log

mp.dps = 40

beta0 = mpf(10) ** (mpf(-50) / 10)
sigma2 = mpf(10) ** ((mpf(-110) - 30) / 10)
P = mpf(10) ** ((mpf(10) - 30) / 10)
qS, qD, qR, zR = (-100, 0), (100, 0), (0, 100), 50


def d2(a, b):
    return sum((mpf(x) - mpf(y)) ** 2 for x, y in zip(a, b))


dSR = d2(qR + (zR,), qS + (0,))
dRD = d2(qR + (zR,), qD + (0,))
hSR2, hRD2 = beta0 / dSR, beta0 / dRD
K2 = P / (sigma2 + P * hSR2)
print("dSR", dSR, "hSR2", hSR2)
print("K2", K2)

pose = (0, 0, 100)
hED2 = beta0 / d2(pose, qD + (0,))
PE = mpf("0.001")
gammaD = P * K2 * hSR2 * hRD2 / ((1 + K2 * hRD2) * sigma2 + PE * hED2)
print("gammaD(pose=(0,0,100),PE=1mW)", gammaD)

hSE2 = beta0 / d2(pose, qS + (0,))
hRE2 = beta0 / d2(pose, qR + (zR,))
gammaE = P * (sqrt(hSE2) + sqrt(K2) * sqrt(hSR2) * sqrt(hRE2)) ** 2 / ((1 + K2 * hRE2) * sigma2)
print("gammaE(pose=(0,0,100))", gammaE)

P0, Pi, Utip, v0, d0, rho, s, A = 59, 124, 200, mpf("4.03"), mpf("0.6"), mpf("1.225"), mpf("0.05"), mpf("0.503")


def phor(v):
    v = mpf(v)
    return P0 * (1 + 3 * v ** 2 / Utip ** 2) + d0 * rho * s * A * v ** 3 / 2 + Pi * sqrt(sqrt(1 + v ** 4 / (4 * v0 ** 4)) - v ** 2 / (2 * v0 ** 2))


print("Phor(0)", phor(0))
print("Phor(10)", phor(10))
