#!/usr/bin/env python3
"""Straight-line MFCC reference used to generate mfcc_tone440.csv.

Written independently of the Rust pipeline: pure Python, a direct O(K^2) DFT,
and every stage spelled out inline. Regenerate with

    python3 gen_mfcc_tone440.py > mfcc_tone440.csv
"""
import cmath
import math

RATE = 11025
N_SAMPLES = 2205
FREQ = 440.0
AMP = 0.5

ALPHA = 0.97
FRAME = round(0.032 * RATE)  # 353
HOP = round(0.010 * RATE)  # 110
K = 512
N_FILT = 40
N_CEP = 13
HAMMING_A = 0.54
MEL_C = 2595.0
FLOOR = 1e-10

x = [AMP * math.sin(2 * math.pi * FREQ * i / RATE) for i in range(N_SAMPLES)]

# pre-emphasis
y = [x[0]] + [x[n] - ALPHA * x[n - 1] for n in range(1, len(x))]

# framing (whole hops only)
n_frames = 1 + (len(y) - FRAME) // HOP
frames = [y[t * HOP : t * HOP + FRAME] for t in range(n_frames)]

# hamming window
win = [HAMMING_A - (1 - HAMMING_A) * math.cos(2 * math.pi * n / (FRAME - 1)) for n in range(FRAME)]

# mel filterbank
def mel(f):
    return MEL_C * math.log10(1 + f / 700.0)

def inv_mel(m):
    return 700.0 * (10 ** (m / MEL_C) - 1)

lo, hi = mel(0.0), mel(RATE / 2)
pts = [inv_mel(lo + (hi - lo) * i / (N_FILT + 1)) for i in range(N_FILT + 2)]
bins = [min(K // 2, int(math.floor((K + 1) * f / RATE))) for f in pts]
fbank = []
for m in range(1, N_FILT + 1):
    row = [0.0] * (K // 2 + 1)
    l, c, r = bins[m - 1], bins[m], bins[m + 1]
    for b in range(l, c + 1):
        row[b] = (b - l) / (c - l)
    for b in range(c, r + 1):
        row[b] = (r - b) / (r - c)
    fbank.append(row)

print("# 440 Hz tone, amp 0.5, 2205 samples @ 11025 Hz, default MFCC config")
for fr in frames:
    w = [fr[i] * win[i] for i in range(FRAME)] + [0.0] * (K - FRAME)
    spec = []
    for n in range(K // 2 + 1):
        s = 0j
        for k in range(K):
            s += w[k] * cmath.exp(-2j * math.pi * ((k * n) % K) / K)
        spec.append(s)
    power = [abs(s) ** 2 / K for s in spec]
    energies = [sum(fb[i] * power[i] for i in range(len(power))) for fb in fbank]
    logs = [math.log(max(e, FLOOR)) for e in energies]
    cep = []
    for n in range(N_CEP):
        scale = math.sqrt(1.0 / N_FILT) if n == 0 else math.sqrt(2.0 / N_FILT)
        cep.append(scale * sum(logs[k] * math.cos(math.pi * n * (k + 0.5) / N_FILT) for k in range(N_FILT)))
    print(",".join(repr(v) for v in cep))
