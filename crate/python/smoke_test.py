#!/usr/bin/env python3
"""Smoke test for the schwinger_thermal_py extension module.

Builds nothing itself: run `cargo build -p schwinger-thermal-py --release`
(or a debug build) first. The script locates the compiled cdylib under
target/, stages it under a temp directory with the importable name, and
exercises the main types and operations end to end.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent
LIB_NAME = "libschwinger_thermal_py.so"
MODULE_SO = "schwinger_thermal_py.so"


def stage_module() -> Path:
    candidates = [
        REPO_ROOT / "target" / "release" / LIB_NAME,
        REPO_ROOT / "target" / "debug" / LIB_NAME,
    ]
    built = [p for p in candidates if p.exists()]
    if not built:
        sys.exit(
            "extension not built; run `cargo build -p schwinger-thermal-py --release` first"
        )
    newest = max(built, key=lambda p: p.stat().st_mtime)
    stage = Path(tempfile.mkdtemp(prefix="schwinger_thermal_py_"))
    shutil.copy2(newest, stage / MODULE_SO)
    return stage


def approx(a: float, b: float, tol: float = 1e-9) -> bool:
    return abs(a - b) <= tol


def main() -> None:
    sys.path.insert(0, str(stage_module()))
    import schwinger_thermal_py as st

    checks = 0

    def ok(name: str, cond: bool) -> None:
        nonlocal checks
        if not cond:
            sys.exit(f"FAIL {name}")
        checks += 1
        print(f"ok {name}")

    # Hamiltonian construction: the hand-expanded N=2 instance.
    params = st.SchwingerParams(2, m=1.0, g=1.0, a=0.5)
    h = params.hamiltonian()
    expected = [
        (0.125, "II"),
        (0.5, "IZ"),
        (0.5, "XX"),
        (0.5, "YY"),
        (-0.625, "ZI"),
    ]
    terms = h.terms()
    ok("n2 term count", len(h) == 5)
    ok(
        "n2 coefficients",
        all(
            got_s == want_s and approx(got_c, want_c, 1e-12)
            for (got_c, got_s), (want_c, want_s) in zip(terms, expected)
        ),
    )
    ok("term dump line", str(h).splitlines()[0] == "0.125 II")

    # Dense realization is Hermitian with the right trace.
    dense = h.to_dense()
    trace = sum(dense[i][i] for i in range(4))
    ok("dense trace", approx(trace.real, 0.5, 1e-12) and approx(trace.imag, 0.0, 1e-12))
    herm = max(
        abs(dense[r][c] - dense[c][r].conjugate()) for r in range(4) for c in range(4)
    )
    ok("dense hermitian", herm < 1e-12)

    # Exact two-level thermodynamics: F = -ln(2 cosh 1) for H = -Z at beta=1.
    single = st.SchwingerParams(2, m=0.0, g=1e-8, a=0.5)
    ok("tiny-coupling hopping pair", len(single.hamiltonian()) == 2)
    f, e, s = st.exact_free_energy(h, beta=1.0)
    ok("thermo identity", approx(f, e - s, 1e-12))

    # Entropy: maximally mixed thetas give N ln 2; zeros give 0.
    ok("entropy max", approx(st.entropy([math.pi / 4] * 3), 3 * math.log(2), 1e-12))
    ok("entropy zero", st.entropy([0.0, 0.0]) == 0.0)

    # Spectrum of the realized state matches the mixing probabilities.
    zeros = st.AnsatzParams.zeros(2, 1)
    ev = zeros.state_eigenvalues()
    ok("pure state spectrum", approx(ev[-1], 1.0, 1e-10) and approx(ev[0], 0.0, 1e-10))

    # Round-trip the checkpoint JSON.
    back = st.AnsatzParams.from_json(zeros.to_json())
    ok("params json round trip", back.n_sites == 2 and back.depth == 1)

    # Variational bound and a small minimization.
    f_exact, _, _ = st.exact_free_energy(h, beta=1.0)
    f_var, _, _ = st.objective(h, 1.0, zeros)
    ok("variational bound at a fixed point", f_var >= f_exact - 1e-9)

    result = st.minimize(h, beta=1.0, depth=1, restarts=2, max_iters=400, seed=3)
    ok("minimize improves on the fixed point", result.free_energy <= f_var + 1e-12)
    ok("minimize respects the bound", result.free_energy >= f_exact - 1e-9)
    ok("result consistency", approx(result.free_energy, result.energy - result.entropy, 1e-10))
    ok("trace returned", len(result.trace) > 0)

    # String tension: zero without a background field, nonzero with one.
    ok("sigma zero at eps=0", st.exact_string_tension(params, beta=1.0) == 0.0)
    charged = st.SchwingerParams(6, epsilon=0.5)
    sigma_cold = st.exact_string_tension(charged, beta=10.0)
    sigma_warm = st.exact_string_tension(charged, beta=0.5)
    ok("tension decreases with temperature", sigma_cold > sigma_warm)
    ok("trial charge offset root", charged.trial_charge_offset() == 0.0)

    # Chemical potential weakens the tension at fixed temperature.
    doped = charged.with_chemical_potential(1.0)
    ok(
        "chemical potential screens",
        st.exact_string_tension(doped, beta=1.0)
        < st.exact_string_tension(charged, beta=1.0),
    )

    # Errors surface as Python exceptions.
    try:
        st.SchwingerParams(3)
    except ValueError:
        ok("odd N rejected", True)
    else:
        sys.exit("FAIL odd N rejected")

    print(f"PASS: {checks} checks")


if __name__ == "__main__":
    main()
