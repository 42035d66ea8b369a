import pytest

from retroplan.dataset import Dataset, SplitSet, clean
from retroplan.errors import LeakageError, RetroplanError
from retroplan.experiments import (
    MODEL_NAMES,
    _check_no_leakage,
    render_table2,
    render_table3,
    run_trials,
)
from retroplan.synthetic import generate_synthetic
from tests.conftest import FAST_SETTINGS


@pytest.fixture(scope="module")
def trial_data():
    data = generate_synthetic(800, seed=31)
    data, _ = clean(data)
    return data


@pytest.fixture(scope="module")
def small_run(trial_data):
    return run_trials(trial_data, ["decision_tree", "mlp"], seeds=[1, 2, 3], settings=FAST_SETTINGS)


def test_reports_bookkeeping(small_run):
    assert [r.model for r in small_run.reports] == ["decision_tree", "mlp"]
    for report in small_run.reports:
        assert len(report.metrics) == 3
        accs = [m.accuracy for m in report.metrics]
        assert min(accs) <= report.mean("accuracy") <= max(accs)


def test_unknown_model_rejected(trial_data):
    with pytest.raises(RetroplanError, match="unknown model"):
        run_trials(trial_data, ["mlp", "swin"], seeds=[1], settings=FAST_SETTINGS)


def test_no_models_rejected(trial_data):
    with pytest.raises(RetroplanError):
        run_trials(trial_data, [], seeds=[1], settings=FAST_SETTINGS)


def test_model_names_cover_spec_set():
    assert set(MODEL_NAMES) == {
        "decision_tree", "gbt", "random_forest", "mlp", "scarf", "c2f_mlp", "c2f_scarf"
    }


def test_run_trials_deterministic(trial_data):
    a = run_trials(trial_data, ["mlp"], seeds=[1, 2], settings=FAST_SETTINGS)
    b = run_trials(trial_data, ["mlp"], seeds=[1, 2], settings=FAST_SETTINGS)
    assert a.table2_csv == b.table2_csv
    assert a.table3_csv == b.table3_csv


def test_table2_shape(small_run):
    lines = small_run.table2_csv.strip().splitlines()
    assert lines[0] == "model,macro_f1_mean,macro_f1_std,accuracy_mean,accuracy_std,n_seeds"
    assert len(lines) == 3
    assert lines[1].startswith("decision_tree,")
    assert small_run.table2_txt.splitlines()[0].split() == ["model", "Macro", "F1", "Accuracy"]


def test_table3_shape(small_run):
    lines = small_run.table3_csv.strip().splitlines()
    assert lines[0].startswith("model,A1_mean,A1_std,A1_n_seeds,A2_mean")
    assert len(lines) == 3
    assert "%" in small_run.table3_txt or "n/a" in small_run.table3_txt


def test_leakage_detection(trial_data):
    rigged = SplitSet(
        train=trial_data.subset(range(0, 100)),
        validation=trial_data.subset(range(100, 120)),
        test=trial_data.subset(range(50, 90)),  # overlaps train
        seed=0,
    )
    with pytest.raises(LeakageError):
        _check_no_leakage(rigged)


def test_error_annotated_with_model_and_seed(schema):
    from retroplan.dataset import Row
    from retroplan.ratings import EnergyRating

    rows = tuple(
        Row(p, EnergyRating.A2) for p, _ in generate_synthetic(60, seed=5, schema=schema).rows
    )
    single_class = Dataset(schema=schema, rows=rows, provenance="synthetic")
    with pytest.raises(RetroplanError, match="'c2f_mlp', seed 1"):
        run_trials(single_class, ["c2f_mlp"], seeds=[1], settings=FAST_SETTINGS)


def test_render_helpers_handle_missing_classes(small_run):
    csv_text, txt_text = render_table2(small_run.reports)
    assert csv_text == small_run.table2_csv
    csv3, txt3 = render_table3(small_run.reports)
    assert csv3 == small_run.table3_csv
    assert txt3 == small_run.table3_txt
