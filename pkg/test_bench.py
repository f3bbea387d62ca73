import pytest

from structures.errors import SizeLimitError
from verification.bench import bench


def test_reps_must_be_positive():
    with pytest.raises(ValueError):
        bench(4, 1, reps=0)


def test_dense_arm_cap():
    with pytest.raises(SizeLimitError):
        bench(300, 2, reps=1)


def test_single_block_is_reported():
    result = bench(1, 2, reps=3)
    assert len(result.timings) == 3
    assert result.verdicts_agree
    assert result.speedup > 0


def test_timings_table():
    result = bench(8, 2, reps=4, seed=9)
    assert list(result.timings.columns) == ['structured_ns', 'dense_ns', 'structured', 'dense']
    assert result.timings['structured'].all()
    assert result.structured_median_ns > 0
    assert result.dense_median_ns > 0


@pytest.mark.slow
@pytest.mark.parametrize('n, d, ratio', [(128, 2, 8.0), (256, 2, 15.0)])
def test_structured_criterion_is_faster(n, d, ratio):
    result = bench(n, d, reps=5)
    assert result.verdicts_agree
    assert result.speedup >= ratio, f"speedup {result.speedup:.1f}x below {ratio}x at n={n}, d={d}"
