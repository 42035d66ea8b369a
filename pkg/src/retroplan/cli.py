"""Command-line workflows: synth, train, evaluate, tables, plan, serve.

Every command exits non-zero with a machine-readable JSON error line on
stderr when a module raises. Environment overrides: RETROPLAN_PORT,
RETROPLAN_CHECKPOINT, RETROPLAN_CATALOG, RETROPLAN_QUESTIONS.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .classifiers import ModelSettings, evaluate
from .dataset import Dataset, clean, load_dataset, save_dataset, split
from .errors import RetroplanError
from .experiments import MODEL_NAMES, run_trials, train_model
from .nn_core import TrainConfig
from .persistence import load_model, save_model
from .retrofit import (
    ComponentCategory,
    PlanRequest,
    default_catalog,
    enumerate_plans,
    load_catalog,
    render_frontier_text,
)
from .schema import default_schema
from .synthetic import generate_synthetic


def _data_source(spec: str, schema, seed: int) -> Dataset:
    """Resolve --data: either ``synthetic:<n>`` or a dataset file path."""
    if spec.startswith("synthetic:"):
        n = int(spec.split(":", 1)[1])
        return generate_synthetic(n, seed=seed, schema=schema)
    return load_dataset(spec, schema)


def _settings_from_args(args) -> ModelSettings:
    cfg = TrainConfig(
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        max_epochs=args.epochs,
        early_stop_patience=args.patience,
        seed=args.seed,
        l2_weight=args.l2,
    )
    return ModelSettings(
        train=cfg,
        hidden_width=args.width,
        n_hidden=args.hidden_layers,
        pretrain_epochs=args.pretrain_epochs,
        repr_dim=args.repr_dim,
        forest_trees=args.forest_trees,
        gbt_rounds=args.gbt_rounds,
    )


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epochs", type=int, default=40)
    p.add_argument("--patience", type=int, default=10)
    p.add_argument("--batch-size", type=int, default=512)
    p.add_argument("--learning-rate", type=float, default=1e-3)
    p.add_argument("--l2", type=float, default=0.0)
    p.add_argument("--width", type=int, default=256)
    p.add_argument("--hidden-layers", type=int, default=4)
    p.add_argument("--pretrain-epochs", type=int, default=15)
    p.add_argument("--repr-dim", type=int, default=64)
    p.add_argument("--forest-trees", type=int, default=100)
    p.add_argument("--gbt-rounds", type=int, default=200)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="retroplan", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic dataset file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--noise-sigma", type=float, default=None)
    p.add_argument("--out", default="synthetic.csv")

    p = sub.add_parser("train", help="train a model and write a checkpoint")
    p.add_argument("--data", required=True, help="dataset file or synthetic:<n>")
    p.add_argument("--model", choices=MODEL_NAMES, default="mlp")
    p.add_argument("--seed", type=int, default=1, help="split and init seed")
    p.add_argument("--data-seed", type=int, default=1, help="seed for synthetic: sources")
    p.add_argument("--out", default="model.llem")
    p.add_argument("--clean-policy", choices=("impute_median", "drop_row"), default="impute_median")
    _add_train_flags(p)

    p = sub.add_parser("evaluate", help="evaluate a checkpoint on a test split")
    p.add_argument("--data", required=True)
    p.add_argument("--checkpoint", default=os.environ.get("RETROPLAN_CHECKPOINT", "model.llem"))
    p.add_argument("--seed", type=int, default=None,
                   help="split seed; defaults to the seed stored in the checkpoint")
    p.add_argument("--data-seed", type=int, default=1)

    p = sub.add_parser("tables", help="run multi-seed trials and write benchmark tables")
    p.add_argument("--config", default=None,
                   help="experiment config JSON: {models, seeds, data, train flags}")
    p.add_argument("--data", default=None)
    p.add_argument("--models", default=None, help="comma-separated model names")
    p.add_argument("--seeds", default=None, help="a count (1..N) or comma-separated seed list")
    p.add_argument("--data-seed", type=int, default=1)
    p.add_argument("--out-dir", default="tables")
    p.add_argument("--seed", type=int, default=1)
    _add_train_flags(p)

    p = sub.add_parser("plan", help="print the retrofit frontier for a profile")
    p.add_argument("--checkpoint", default=os.environ.get("RETROPLAN_CHECKPOINT", "model.llem"))
    p.add_argument("--catalog", default=os.environ.get("RETROPLAN_CATALOG"))
    p.add_argument("--profile", required=True, help="JSON file of feature values")
    p.add_argument("--budget", type=float, default=None)
    p.add_argument("--categories", default=None, help="comma-separated category subset")
    p.add_argument("--strict", action="store_true", help="force one item per selected category")
    p.add_argument("--budget-basis", choices=("net", "gross"), default="net",
                   help="filter the budget on net (post-grant) or gross cost")
    p.add_argument("--cap", type=int, default=1_000_000)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--checkpoint", default=os.environ.get("RETROPLAN_CHECKPOINT", "model.llem"))
    p.add_argument("--catalog", default=os.environ.get("RETROPLAN_CATALOG"))
    p.add_argument("--questions", default=os.environ.get("RETROPLAN_QUESTIONS"))
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=int(os.environ.get("RETROPLAN_PORT", "8349")))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except RetroplanError as exc:
        print(json.dumps(exc.payload()), file=sys.stderr)
        return 2
    except OSError as exc:
        print(json.dumps({"error": "io_error", "message": str(exc)}), file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    schema = default_schema()

    if args.command == "synth":
        data = generate_synthetic(args.n, seed=args.seed, schema=schema,
                                  noise_sigma=args.noise_sigma)
        save_dataset(data, args.out)
        print(json.dumps({"written": args.out, "rows": len(data)}))
        return 0

    if args.command == "train":
        data = _data_source(args.data, schema, args.data_seed)
        data, report = clean(data, args.clean_policy)
        splits = split(data, args.seed)
        settings = _settings_from_args(args)
        model = train_model(args.model, splits, settings)
        save_model(args.out, model, extra_meta={
            "model_name": args.model,
            "split_seed": args.seed,
            "data": args.data,
            "data_seed": args.data_seed,
        })
        print(json.dumps({
            "written": args.out,
            "model": args.model,
            "train_rows": len(splits.train),
            "cleaned_zeros": report.total_zeros,
        }))
        return 0

    if args.command == "evaluate":
        from .checkpoint import load_checkpoint
        ckpt = load_checkpoint(args.checkpoint, expect_schema_hash=schema.schema_hash)
        seed = args.seed if args.seed is not None else int(ckpt.model_meta.get("split_seed", 1))
        model = load_model(args.checkpoint, schema)
        data = _data_source(args.data, schema, args.data_seed)
        data, _ = clean(data)
        splits = split(data, seed)
        metrics = evaluate(model, splits.test)
        print(json.dumps(metrics.to_jsonable()))
        print(f"accuracy: {metrics.accuracy:.4f}  macro_f1: {metrics.macro_f1:.4f}  "
              f"n_test: {metrics.n_test}", file=sys.stderr)
        return 0

    if args.command == "tables":
        if args.config:
            doc = json.loads(Path(args.config).read_text("utf-8"))
            args.data = args.data or doc.get("data")
            args.models = args.models or ",".join(doc.get("models", []))
            if args.seeds is None and "seeds" in doc:
                s = doc["seeds"]
                args.seeds = ",".join(str(x) for x in s) if isinstance(s, list) else str(s)
            for key in ("epochs", "patience", "batch_size", "learning_rate", "width",
                        "hidden_layers", "pretrain_epochs", "repr_dim"):
                if key in doc:
                    setattr(args, key, doc[key])
        if not args.data:
            raise RetroplanError("tables needs --data or a config file with a data entry")
        args.models = args.models or "mlp"
        args.seeds = args.seeds or "5"
        data = _data_source(args.data, schema, args.data_seed)
        data, _ = clean(data)
        models = [m.strip() for m in args.models.split(",") if m.strip()]
        if "," in args.seeds:
            seeds = [int(s) for s in args.seeds.split(",")]
        else:
            seeds = list(range(1, int(args.seeds) + 1))
        settings = _settings_from_args(args)
        run = run_trials(data, models, seeds, settings)
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, text in run.files.items():
            (out_dir / name).write_text(text, encoding="utf-8")
        print(json.dumps({"written": sorted(run.files), "out_dir": str(out_dir),
                          "models": models, "seeds": seeds}))
        return 0

    if args.command == "plan":
        model = load_model(args.checkpoint, schema)
        catalog = load_catalog(args.catalog, schema) if args.catalog else default_catalog(schema)
        profile = json.loads(Path(args.profile).read_text("utf-8"))
        profile = schema.validate_profile(profile)
        if args.categories is None:
            categories = tuple(ComponentCategory)
        else:
            categories = tuple(ComponentCategory(c.strip()) for c in args.categories.split(",") if c.strip())
        req = PlanRequest(
            home=profile,
            selected_categories=categories,
            budget_eur=args.budget,
            combination_cap=args.cap,
            budget_basis=args.budget_basis,
            strict=args.strict,
        )

        class _Predictor:
            def predict_profiles(self, profiles):
                from .classifiers import predict_profiles
                return predict_profiles(model, profiles)

        frontier = enumerate_plans(req, catalog, _Predictor())
        print(render_frontier_text(frontier), end="")
        return 0

    if args.command == "serve":
        from .service import build_state, serve
        state = build_state(args.checkpoint, args.catalog, args.questions, schema)
        print(json.dumps({"serving": True, "port": args.port,
                          "model_version": state.model_version}), flush=True)
        serve(state, host=args.host, port=args.port)
        return 0

    raise RetroplanError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
