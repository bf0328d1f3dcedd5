import os
import subprocess
import sys

from quathyp import kernels


def _backend(env_extra, drop=()):
    env = {k: v for k, v in {**os.environ, **env_extra}.items() if k not in drop}
    code = "import quathyp.kernels as k; print(k.BACKEND)"
    return subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.strip()


def test_backend_registry():
    impls = kernels.backends()
    assert "numpy" in impls
    assert kernels.BACKEND in impls or os.environ.get("QUATHYP_PURE")


def test_pure_flag_forces_numpy():
    assert _backend({"QUATHYP_PURE": "1"}) == "numpy"
    expected = "cython" if "cython" in kernels.backends() else "numpy"
    assert _backend({}, drop=("QUATHYP_PURE",)) == expected
