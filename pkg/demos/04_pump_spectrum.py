"""
From shorthand to pump lines
============================

Each nonzero shorthand entry at position k drives all mode pairs whose
frequencies sum to 2*Omega + (k+1)*dOmega. Scalar entries give a line with a
phase of 0 or pi; symmetric 2x2 blocks ((a, b), (b, a)) give one line
polarized at atan2(b, a) from the Z axis.
"""

from combcluster import CombSpec, compile_polarized, compile_scalar, crown_full_hankel, torus_block_hankel_2

crown = crown_full_hankel(6)
spec = compile_scalar(crown, CombSpec(offset_hz=190e12, fsr_hz=1e9, n_freqs=crown.K))
print("crown(6):", len(spec.lines), "lines")
for line in spec.lines:
    print(f"  k={line.skew_index:2d}  {line.frequency_hz:.6e} Hz  amp={line.amplitude}  phase={line.phase:.4f}")

torus = torus_block_hankel_2(6)
spec = compile_polarized(torus)
print("torus(6):", len(spec.lines), "polarized lines")
for line in spec.lines[:4]:
    print(f"  k={line.skew_index:3d}  amp={line.amplitude:.4f}  angle={line.polarization_deg:+.0f} deg  phase={line.phase:.4f}")
print("  ...")
print(spec.to_csv().splitlines()[0])
