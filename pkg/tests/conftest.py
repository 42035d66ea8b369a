import pytest

from retroplan.classifiers import ModelSettings, train_coarse_to_fine, train_mlp
from retroplan.dataset import clean, split
from retroplan.nn_core import TrainConfig
from retroplan.schema import default_schema
from retroplan.synthetic import generate_synthetic

#: settings small enough for unit tests, big enough to learn something
FAST_SETTINGS = ModelSettings(
    train=TrainConfig(seed=1, max_epochs=25, batch_size=128, early_stop_patience=8,
                      learning_rate=3e-3),
    hidden_width=64,
    n_hidden=2,
    pretrain_epochs=4,
    repr_dim=24,
    head_width=24,
    tree_depth=8,
    tree_min_leaf=3,
    forest_trees=8,
    gbt_rounds=8,
)


@pytest.fixture(scope="session")
def schema():
    return default_schema()


@pytest.fixture(scope="session")
def small_data():
    data = generate_synthetic(2500, seed=11)
    data, _ = clean(data)
    return data


@pytest.fixture(scope="session")
def small_splits(small_data):
    return split(small_data, seed=1)


@pytest.fixture(scope="session")
def tiny_mlp(small_splits):
    return train_mlp(small_splits, FAST_SETTINGS)


@pytest.fixture(scope="session")
def tiny_c2f(small_splits):
    return train_coarse_to_fine(small_splits, FAST_SETTINGS, base="mlp")


@pytest.fixture(scope="session")
def random_profiles(schema):
    data = generate_synthetic(400, seed=77)
    return [r.profile for r in data.rows]
