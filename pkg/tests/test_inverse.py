import numpy as np
import pytest
from hypothesis import given, strategies as st

from adrt_exact import (
    CostLedger,
    Image,
    Quadrant,
    SectionedTransform,
    StructuralError,
    adrt_full,
    adrt_init,
    adrt_single_quadrant,
    compute_deltas,
    iadrt,
    iadrt_from_full,
    inverse_cost,
    level_bound_cost,
    merge_level,
    prefix_restore,
    split_level,
)
from adrt_exact.core import support_mask

from conftest import images, int_image


@pytest.fixture
def top2(img2):
    return adrt_single_quadrant(img2)


def test_deltas_2x2(top2):
    lo, hi = compute_deltas(top2, 0)
    assert lo.value(-1, 0) == 1 and lo.value(0, 0) == 1
    assert hi.value(-1, 0) == 3 and hi.value(0, 0) == 1


def test_deltas_zero():
    lo, hi = compute_deltas(SectionedTransform.zeros(3, 2), 1)
    assert not lo.values.any() and not hi.values.any()


def test_deltas_level0_rejected(img2):
    with pytest.raises(StructuralError):
        compute_deltas(adrt_init(img2), 0)


def test_prefix_restore_2x2(top2):
    lo, hi = compute_deltas(top2, 0)
    assert prefix_restore(lo)[0].tolist() == [1, 2]
    assert prefix_restore(hi)[0].tolist() == [3, 4]


def test_prefix_restore_zero():
    lo, _ = compute_deltas(SectionedTransform.zeros(2, 2), 0)
    assert not prefix_restore(lo).any()


def test_single_section_path_matches_split(rng):
    img = int_image(rng, 4)
    r = adrt_init(img)
    for _ in range(3):
        r = merge_level(r)
    led = CostLedger()
    whole = split_level(r, ledger=led)
    led_parts = CostLedger()
    for sec in range(r.num_sections):
        lo, hi = compute_deltas(r, sec, ledger=led_parts)
        assert np.array_equal(prefix_restore(lo, ledger=led_parts), whole.data[2 * sec])
        assert np.array_equal(prefix_restore(hi, ledger=led_parts), whole.data[2 * sec + 1])
    assert led == led_parts


def test_split_2x2(top2):
    low = split_level(top2)
    assert low.row(0, 0).tolist() == [1, 2]
    assert low.row(1, 0).tolist() == [3, 4]


def test_split_zero():
    assert split_level(SectionedTransform.zeros(3, 3)) == SectionedTransform.zeros(3, 2)


def _random_stack(rng, n, m):
    data = rng.integers(-(2**20), 2**20, size=(1 << (n - m), 1 << m, (1 << n) + (1 << m) - 1))
    data = data.astype(float)
    data[:, ~support_mask(n, m)] = 0
    return SectionedTransform(n, m, data)


@pytest.mark.parametrize("n", range(1, 7))
def test_split_inverts_merge(rng, n):
    for m in range(1, n + 1):
        lower = _random_stack(rng, n, m - 1)
        assert split_level(merge_level(lower)) == lower


def test_iadrt_2x2(top2, img2):
    assert iadrt(top2) == img2


def test_iadrt_zero():
    assert iadrt(SectionedTransform.zeros(3, 3)) == Image.from_array(np.zeros((8, 8)))


def test_iadrt_n6_bit_exact(rng):
    img = int_image(rng, 6)
    assert iadrt(adrt_single_quadrant(img)) == img


@pytest.mark.parametrize("n", range(1, 9))
def test_iadrt_uniform(rng, n):
    img = Image.from_array(rng.random((1 << n, 1 << n)))
    rec = iadrt(adrt_single_quadrant(img))
    err = float(np.max(np.abs(rec.values - img.values)))
    assert err <= 1e-10, f"max abs error {err:.3g} at n={n}"


def test_dyadic_values_exact(rng):
    # values with few mantissa bits keep every partial sum exact
    img = Image.from_array(rng.integers(0, 2**20, (256, 256)) / 2**20)
    assert iadrt(adrt_single_quadrant(img)) == img


@given(images(max_n=6))
def test_roundtrip_property(img):
    assert iadrt(adrt_single_quadrant(img)) == img


def test_iadrt_rejects_wrong_level(img2):
    with pytest.raises(StructuralError):
        iadrt(adrt_init(img2))


def test_iadrt_rejects_nonzero_padding(top2):
    data = top2.data.copy()
    data[0, 0, 2] = 1.0
    with pytest.raises(StructuralError):
        iadrt(SectionedTransform(1, 1, data))


@pytest.mark.parametrize("q", list(Quadrant))
def test_from_full(rng, q):
    img = int_image(rng, 4)
    assert iadrt_from_full(adrt_full(img), q) == img


def test_from_full_missing_quadrant(rng):
    full = adrt_full(int_image(rng, 2))
    del full[Quadrant.FLIP_COLUMNS]
    with pytest.raises(KeyError):
        iadrt_from_full(full, Quadrant.FLIP_COLUMNS)


def _inverse_cost_closed(n):
    # sum_m 2**(n-m+2) * (2**(m-1) * 2**n + 2**(m-1) (2**(m-1) - 1) / 2)
    return 2 * n * 4**n + (1 << n) * ((1 << n) - 1 - n)


def test_cost_small_values():
    assert inverse_cost(1) == 8
    assert inverse_cost(2) == 68


@pytest.mark.parametrize("n", range(1, 13))
def test_cost_closed_form(n):
    assert inverse_cost(n) == _inverse_cost_closed(n)
    assert inverse_cost(n) <= level_bound_cost(n)


def _count_by_enumeration(n):
    # one subtraction and one addition per target entry (section, s, h)
    ops = 0
    for m in range(1, n + 1):
        for _ in range(1 << (n - m + 1)):
            for s in range(1 << (m - 1)):
                ops += 2 * len(range(-s, 1 << n))
    return ops


@pytest.mark.parametrize("n", range(1, 8))
def test_ledger_matches_enumeration(rng, n):
    led = CostLedger()
    iadrt(adrt_single_quadrant(int_image(rng, n)), ledger=led)
    assert led.additions == led.subtractions
    assert led.total == _count_by_enumeration(n) == inverse_cost(n)
    assert sorted(led.per_level) == list(range(n))


@pytest.mark.parametrize("n", range(1, 7))
def test_ledger_per_split(rng, n):
    img = int_image(rng, n)
    r = adrt_single_quadrant(img)
    for m in range(n, 0, -1):
        led = CostLedger()
        r = split_level(r, ledger=led)
        per_target = sum((1 << n) + s for s in range(1 << (m - 1)))
        assert led.additions == led.subtractions == (1 << (n - m + 1)) * per_target


@given(st.integers(2, 7))
def test_parallel_inverse_identical(workers):
    rng = np.random.default_rng(workers)
    img = int_image(rng, 5)
    top = adrt_single_quadrant(img)
    a, b = CostLedger(), CostLedger()
    assert iadrt(top, ledger=a) == iadrt(top, ledger=b, workers=workers) == img
    assert a == b
