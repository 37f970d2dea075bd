import math

import pytest

from quench.cli.verify import (
    IONIZATION_COEFFICIENT,
    PT_UNITARITY_KAPPAS,
    ManifestItem,
    default_manifest,
    verify_paper_numbers,
)
from quench.errors import ConvergenceError


def _fast_items(prefix: str) -> list[ManifestItem]:
    return [item for item in default_manifest() if item.name.startswith(prefix)]


def test_manifest_names_are_unique():
    names = [item.name for item in default_manifest()]
    assert len(names) == len(set(names))
    assert "hydrogen_ionization" in names
    assert {item.name for item in default_manifest() if item.slow} == {
        "pt_lambda2_excitation_argmax",
        "hydrogen_continuum_integral",
    }


@pytest.mark.parametrize("prefix", ["delta_", "sho_", "pt_lambda1_"])
def test_fast_items_pass(prefix):
    report = verify_paper_numbers(items=_fast_items(prefix))
    assert report.passed, [r.name for r in report.failures]


def test_hydrogen_items_pass():
    report = verify_paper_numbers(items=_fast_items("hydrogen_"), include_slow=False)
    assert report.passed, [r.name for r in report.failures]
    assert len(report.results) == 12


def test_tampered_item_fails():
    """Test that a wrong expected value is caught and reported."""

    items = [
        ManifestItem("good", lambda: 1.0, 1.0, 1e-12),
        ManifestItem("tampered", lambda: IONIZATION_COEFFICIENT, 0.2834, 1e-10),
    ]
    report = verify_paper_numbers(items=items)
    assert not report.passed
    assert [r.name for r in report.failures] == ["tampered"]


def test_tolerance_override():
    items = [ManifestItem("loose", lambda: 1.001, 1.0, 1e-6)]
    assert not verify_paper_numbers(items=items).passed
    assert verify_paper_numbers({"loose": 1e-2}, items=items).passed


def test_unknown_override():
    with pytest.raises(ValueError):
        verify_paper_numbers({"no_such_item": 1.0}, items=[])


def test_slow_items_skipped():
    items = [
        ManifestItem("fast", lambda: 0.0, 0.0, 1e-12),
        ManifestItem("slow", lambda: 0.0, 0.0, 1e-12, slow=True),
    ]
    report = verify_paper_numbers(items=items, include_slow=False)
    assert [r.name for r in report.results] == ["fast"]


def test_numerical_failure_is_reported():
    """Test that an item raising a numerical error fails instead of aborting."""

    def diverging() -> float:
        raise ConvergenceError("budget exhausted")

    items = [
        ManifestItem("diverging", diverging, 1.0, 1e-6),
        ManifestItem("nan", lambda: float("nan"), 1.0, 1e-6),
    ]
    report = verify_paper_numbers(items=items)
    assert [r.passed for r in report.results] == [False, False]
    assert report.results[0].error == "ConvergenceError: budget exhausted"
    assert math.isnan(report.results[0].measured)


def test_report_table():
    report = verify_paper_numbers(items=[ManifestItem("one", lambda: 1.0, 1.0, 1e-12)])
    table = report.as_table()
    assert table.name == "verification"
    assert table.column("item") == ["one"]
    assert table.column("passed") == ["yes"]


def test_pt_unitarity_velocities():
    names = {item.name for item in _fast_items("pt_lambda1_unitarity_")}
    assert PT_UNITARITY_KAPPAS == (0.25, 0.5, 1.0, 2.0, 4.0)
    assert names == {f"pt_lambda1_unitarity_kappa_{k:g}" for k in PT_UNITARITY_KAPPAS}
