#!/usr/bin/env python3
"""Brute-force cross-check for pointwise transform values.

Midpoint rule on a fine cartesian y-grid applied to the defining integral
    W_tau(f,g)(x,xi) = int e^{-2pi i xi.y} f(x+tau y) conj(g(x-(1-tau)y)) dy
for the log-annulus profile |t|^{-d/2} on [r1,r2], d=2. Slow but entirely
independent of the library's reduction; good to ~1e-4 relative.
"""

import argparse

import numpy as np


def profile(t, r1, r2):
    return np.where((t >= r1) & (t <= r2), 1.0 / np.maximum(t, 1e-300), 0.0)


def wtau_brute(r1, r2, tau, x, xi, n=6000):
    tp = 1.0 - tau
    half = max(1.0 / tau, 1.0 / tp) * (2.0 * r2 + 2.0 * np.hypot(*x)) + 1.0
    h = 2.0 * half / n
    c = (np.arange(n) + 0.5) * h - half
    y0, y1 = np.meshgrid(c, c, indexing="ij")
    pa = np.hypot(x[0] + tau * y0, x[1] + tau * y1)
    pb = np.hypot(x[0] - tp * y0, x[1] - tp * y1)
    amp = profile(pa, r1, r2) * profile(pb, r1, r2)
    phase = -2.0 * np.pi * (xi[0] * y0 + xi[1] * y1)
    val = np.sum(amp * np.exp(1j * phase)) * h * h
    return val


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--r1", type=float, default=1.0)
    ap.add_argument("--r2", type=float, default=np.e)
    ap.add_argument("--n", type=int, default=6000)
    args = ap.parse_args()

    cases = [
        (0.3, (0.7, 0.3), (0.4, -0.2)),
        (0.5, (0.7, 0.3), (0.4, -0.2)),
        (0.3, (0.0, 0.0), (0.8, 0.0)),
        (0.5, (0.0, 0.0), (0.8, 0.0)),
        (0.3, (1.3, 0.0), (0.0, 0.5)),
        (0.5, (1.3, 0.0), (0.0, 0.5)),
        (0.65, (0.7, 0.3), (0.4, -0.2)),
    ]
    for tau, x, xi in cases:
        v = wtau_brute(args.r1, args.r2, tau, x, xi, args.n)
        print(
            f"tau={tau:.2f} x=({x[0]:+.2f},{x[1]:+.2f}) xi=({xi[0]:+.2f},{xi[1]:+.2f})"
            f"  W = {v.real:+.8f} {v.imag:+.8f}i"
        )


if __name__ == "__main__":
    main()
