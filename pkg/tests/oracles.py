"""Independent reference computations used by several test modules.

None of these call into the cohomology or ideal machinery of the library;
they count monomials directly from hard-coded Cox ring gradings.
"""

import itertools

import numpy as np

from toric_hdi import _kernels
from toric_hdi.cells import build_P, cech_ranks_for_negset
from toric_hdi.complex import build_complex, hilbert_function

# Cox ring gradings, one degree vector per variable, in the class-group
# basis the library uses for each fan.
P1_DEGREES = [(1,), (1,)]
P2_DEGREES = [(1,), (1,), (1,)]
F1_DEGREES = [(1, 0), (0, 1), (1, 0), (1, 1)]

# an ample class on each target, used to twist into the range where graded
# modules presenting the same sheaf must agree
AMPLE = {"b1": (1,), "b2": (1,), "b3": (2, 1), "b4": (1,)}
TWIST = {"b1": 6, "b2": 6, "b3": 3, "b4": 6}


def monomials(degrees, d, bound=40):
    """Exponent vectors of the given class, by brute force over a box."""
    r = len(degrees)
    out = []
    for f in itertools.product(range(bound + 1), repeat=r):
        tot = tuple(sum(f[k] * degrees[k][j] for k in range(r)) for j in range(len(d)))
        if tot == tuple(d):
            out.append(f)
    return out


def count(degrees, d, keep=lambda f: True, bound=30):
    return sum(1 for f in monomials(degrees, d, bound) if keep(f))


def blowdown_module(d):
    """<z0, z2>^3 / (<z0^4> + <z2^4>) over C[z0, z1, z2], standard grading.

    Monomials of degree d in the cube ideal (z0 + z2 exponents >= 3) with
    both the z0 and z2 exponents below 4.
    """
    return count(P2_DEGREES, (d,), lambda f: f[0] + f[2] >= 3 and f[0] < 4 and f[2] < 4, bound=d + 1)


def line_bundle_p1(k, d):
    """dim O(k)_d on P^1."""
    return max(0, d + k + 1)


def threefold_module(a, b):
    """O + O/O(-2B) + O/O(-B) on F1, with B the variable y1 of degree (0,1)."""
    full = count(F1_DEGREES, (a, b), bound=max(a, b) + 1)
    mod2 = count(F1_DEGREES, (a, b), lambda f: f[1] < 2, bound=max(a, b) + 1)
    mod1 = count(F1_DEGREES, (a, b), lambda f: f[1] < 1, bound=max(a, b) + 1)
    return full + mod2 + mod1


def hilbert_values(C, i, grid):
    return [hilbert_function(C, i, d).total for d in grid]


def twisted_grid(name, grid):
    k, A = TWIST[name], AMPLE[name]
    return [tuple(x + k * a for x, a in zip(d, A)) for d in grid]


def dual_oracle_mismatches(F, D):
    """Compare Čech ranks on every character of a generous box with h_i.

    Returns a list of (m, cech, table) disagreements, plus a ("totals", ...)
    entry if the summed ranks differ.
    """
    from toric_hdi.negsets import h_i

    table = h_i(F, D)
    B = sum(abs(x) for x in D) + 2
    axes = [np.arange(-B, B + 1)] * F.n
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, F.n).astype(np.int64)
    masks = _kernels.sign_masks(pts, np.array(F.rays, dtype=np.int64), np.array(D, dtype=np.int64))
    P = build_P(F)
    uniq, inv = np.unique(masks, return_inverse=True)
    ranks = np.array([cech_ranks_for_negset(P, int(u)) for u in uniq])[inv.reshape(-1)]
    nz = np.flatnonzero(ranks.any(axis=1))
    got = {tuple(int(x) for x in pts[k]): tuple(int(x) for x in ranks[k]) for k in nz}
    expected = {m: r for m, r in table.degrees.items() if any(r)}
    bad = [(m, got.get(m), expected.get(m)) for m in sorted(set(got) | set(expected)) if got.get(m) != expected.get(m)]
    if [int(x) for x in ranks.sum(axis=0)] != list(table.h):
        bad.append(("totals", [int(x) for x in ranks.sum(axis=0)], list(table.h)))
    return bad
