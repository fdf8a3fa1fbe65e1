import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from em_lab import _kernels_py, kernels

compiled = pytest.importorskip("em_lab._kernels")


@st.composite
def kernel_inputs(draw):
    r = draw(st.integers(1, 3))
    width = draw(st.integers(0, 5))
    n = draw(st.integers(0, 5))
    table = [draw(st.lists(st.integers(-1, 6), min_size=width, max_size=width)) for _ in range(r)]
    colors = draw(st.lists(st.integers(0, r - 1), min_size=n, max_size=n))
    strict = draw(st.lists(st.integers(0, 1), min_size=max(n - 1, 0), max_size=max(n - 1, 0)))
    return colors, strict, table


@settings(max_examples=300, deadline=None)
@given(kernel_inputs())
def test_compiled_matches_pure(args):
    assert list(compiled.fundamental_counts(*args)) == _kernels_py.fundamental_counts(*args)


def test_known_values():
    # one letter over 1, q, q^2
    assert _kernels_py.fundamental_counts([0], [], [[0, 1, 2]]) == [1, 1, 1]
    # empty subject
    assert _kernels_py.fundamental_counts([], [], [[0]]) == [1]
    # strict drop with a single index available: nothing admissible
    assert _kernels_py.fundamental_counts([0, 0], [1], [[0]]) == []


def test_overflow_guard_routes_to_pure(monkeypatch):
    calls = []
    monkeypatch.setattr(kernels, "_INT64_LIMIT", 1)
    monkeypatch.setattr(_kernels_py, "fundamental_counts",
                        lambda *a: calls.append(a) or [1])
    kernels.fundamental_counts([0], [], [[0]])
    assert calls


def test_backend_selection():
    assert kernels.BACKEND == "compiled"
    env = {**os.environ, "EM_LAB_PURE": "1"}
    proc = subprocess.run([sys.executable, "-c", "from em_lab import kernels; print(kernels.BACKEND)"],
                          capture_output=True, text=True, env=env)
    assert proc.stdout.strip() == "python"
