"""Command-line front end with JSON output and a persistent result cache.

Subcommands: lattice info, theta, weilrep, heegner, eisenstein, density,
verify.  Exact values are serialized as reduced-fraction strings, never as
floats; floating renderings sit under explicit "approx" keys.  Expensive
results (Heegner classes, density reports, theta series) are cached under
--cache-dir / $CYCLETHETA_CACHE keyed by operation, canonical input digest,
and package version; cache writes are atomic (write-temp-then-rename).
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import click

from . import __version__, eisenstein
from .enumeration import theta_qseries
from .heegner import heegner_cycle
from .quadlattice import BUILTIN_GRAMS, LatticeError, discriminant_form, named_lattice, new_lattice
from .verify import (
    SUITE_NAMES,
    reports_to_json,
    suite_all,
    suite_cup_product,
    suite_siegel_weil,
    suite_volume_formula,
    suite_weilrep,
)
from .weilrep import rho_S, rho_T, rho_word, verify_relations

__all__ = ["main", "run", "CacheEntry", "ResultCache"]


def run(argv) -> int:
    """Programmatic dispatch; returns the exit code (0 ok, 1 computation
    error, 2 usage error) instead of terminating the process."""
    try:
        main.main(args=list(argv), prog_name="cycletheta", standalone_mode=False)
        return 0
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.ClickException as exc:
        exc.show()
        return 1
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise click.UsageError(f"not an integer or p/q fraction: {text!r}")


def _resolve_lattice(spec: str):
    if spec in BUILTIN_GRAMS:
        return named_lattice(spec)
    path = Path(spec)
    if path.exists():
        try:
            data = json.loads(path.read_text())
            gram = data["gram"]
        except (json.JSONDecodeError, TypeError, KeyError) as exc:
            raise click.UsageError(f"{spec}: expected a JSON object with a 'gram' key ({exc})")
        return new_lattice(gram)
    raise click.UsageError(
        f"--lattice must be one of {sorted(BUILTIN_GRAMS)} or a JSON file with a 'gram' key"
    )


@dataclass(frozen=True)
class CacheEntry:
    key: str
    payload: dict
    created_at: float


class ResultCache:
    """Content-addressed JSON store; a version bump invalidates by key."""

    def __init__(self, directory: Path | None):
        self.directory = directory
        if directory is not None:
            directory.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def make_key(operation: str, inputs: dict) -> str:
        canonical = json.dumps(
            {"operation": operation, "inputs": inputs, "version": __version__},
            sort_keys=True,
        )
        return hashlib.sha256(canonical.encode()).hexdigest()

    def get(self, key: str) -> dict | None:
        if self.directory is None:
            return None
        path = self.directory / f"{key}.json"
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text())
            return entry["payload"]
        except (json.JSONDecodeError, KeyError):
            return None

    def put(self, key: str, payload: dict) -> None:
        if self.directory is None:
            return
        entry = {"key": key, "payload": payload, "created_at": time.time()}
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, self.directory / f"{key}.json")
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def fetch_or_compute(self, operation: str, inputs: dict, compute) -> dict:
        key = self.make_key(operation, inputs)
        payload = self.get(key)
        if payload is None:
            payload = compute()
            self.put(key, payload)
        return payload


def _cache_from_ctx(ctx) -> ResultCache:
    cache_dir = ctx.obj.get("cache_dir")
    if cache_dir is None:
        env = os.environ.get("CYCLETHETA_CACHE")
        if env:
            cache_dir = Path(env)
        else:
            base = os.environ.get("XDG_CACHE_HOME") or str(Path.home() / ".cache")
            cache_dir = Path(base) / "cycletheta"
    return ResultCache(cache_dir)


LIBRARY_ERRORS = (LatticeError, ValueError, ArithmeticError, RuntimeError)


def _run_guarded(fn):
    try:
        return fn()
    except click.ClickException:
        raise
    except LIBRARY_ERRORS as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(1)


@click.group()
@click.option("--cache-dir", type=click.Path(path_type=Path), default=None,
              help="Result cache directory (default: $CYCLETHETA_CACHE or OS cache dir).")
@click.pass_context
def main(ctx, cache_dir):
    """Exact computations with even lattices: theta series, Weil
    representations, Heegner cycles, Eisenstein coefficients, densities."""
    ctx.ensure_object(dict)
    ctx.obj["cache_dir"] = cache_dir


@main.group()
def lattice():
    """Lattice inspection."""


@lattice.command("info")
@click.option("--lattice", "spec", required=True, help="Built-in name or JSON Gram file.")
@click.option("--json", "as_json", is_flag=True)
def lattice_info(spec, as_json):
    """Rank, signature, determinant, and discriminant form data."""

    def go():
        lat = _resolve_lattice(spec)
        df = discriminant_form(lat)
        payload = {
            "gram": [list(r) for r in lat.gram],
            "rank": lat.rank,
            "signature": list(lat.signature),
            "det": lat.det,
            "discriminant_form": {
                "order": df.order,
                "sig8": df.sig8,
                "level": df.level,
                "generators": [
                    {"coset": [str(x) for x in vec], "order": d}
                    for vec, d in df.generators
                ],
                "q_table": {
                    df.coset_label(lam): str(df.q_table[lam]) for lam in df.cosets
                },
            },
        }
        if as_json:
            click.echo(json.dumps(payload, sort_keys=True, indent=2))
            return
        click.echo(f"rank {lat.rank}, signature {lat.signature}, det {lat.det}")
        click.echo(f"|L'/L| = {df.order}, sig8 = {df.sig8}, level = {df.level}")
        for lam in df.cosets:
            click.echo(f"  Q{df.coset_label(lam)} = {df.q_table[lam]}")

    _run_guarded(go)


@main.command("theta")
@click.option("--lattice", "spec", required=True)
@click.option("--max", "truncation", required=True, help="Truncation bound (integer or p/q).")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def theta_cmd(ctx, spec, truncation, as_json):
    """Coset theta series of a positive definite lattice below --max."""

    def go():
        lat = _resolve_lattice(spec)
        bound = _parse_rational(truncation)
        cache = _cache_from_ctx(ctx)
        payload = cache.fetch_or_compute(
            "theta",
            {"gram": [list(r) for r in lat.gram], "truncation": str(bound)},
            lambda: theta_qseries(lat, bound).to_json_dict(),
        )
        if as_json:
            click.echo(json.dumps(payload, sort_keys=True, indent=2))
            return
        for coset, pairs in sorted(payload["components"].items()):
            terms = [f"{c}*q^({e})" for e, c in pairs if c != "0"]
            click.echo(f"coset={coset}: " + (" + ".join(terms) if terms else "0"))

    _run_guarded(go)


@main.command("weilrep")
@click.option("--lattice", "spec", required=True)
@click.option("--word", default=None, help="Generator word over S, T (lowercase or ^-1 inverts).")
@click.option("--json", "as_json", is_flag=True)
def weilrep_cmd(spec, word, as_json):
    """Weil representation generator matrices (exact and floating)."""

    def go():
        lat = _resolve_lattice(spec)
        df = discriminant_form(lat)
        if word is not None:
            mats = {word: rho_word(df, word)}
        else:
            mats = {"S": rho_S(df), "T": rho_T(df)}
        relations = verify_relations(df, raise_on_failure=False)
        payload = {
            "order": df.order,
            "sig8": df.sig8,
            "relations_pass": relations.all_pass,
            "matrices": {
                w: {
                    "exact": m.entry_strings(),
                    "approx": [[[z.real, z.imag] for z in row] for row in m.to_complex()],
                }
                for w, m in mats.items()
            },
        }
        if as_json:
            click.echo(json.dumps(payload, sort_keys=True, indent=2))
            return
        for w, m in mats.items():
            click.echo(f"rho({w}) on {df.order} cosets:")
            approx = m.to_complex()
            for row, row_c in zip(m.entry_strings(), approx):
                click.echo("  [" + ", ".join(row) + "]")
                click.echo(
                    "    approx ["
                    + ", ".join(f"{z.real:+.6f}{z.imag:+.6f}i" for z in row_c)
                    + "]"
                )
        click.echo(f"relations: {'pass' if relations.all_pass else 'FAIL'}")

    _run_guarded(go)


@main.command("heegner")
@click.option("--level", "n", required=True, type=int)
@click.option("--residue", "r", required=True, type=int)
@click.option("--disc", "d", required=True, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def heegner_cmd(ctx, n, r, d, as_json):
    """The weighted 0-cycle at level N, residue r, discriminant -d."""

    def go():
        cache = _cache_from_ctx(ctx)
        payload = cache.fetch_or_compute(
            "heegner",
            {"N": n, "r": r, "d": d},
            lambda: heegner_cycle(n, r, d).to_json_dict(),
        )
        if as_json:
            click.echo(json.dumps(payload, sort_keys=True, indent=2))
            return
        click.echo(f"degree {payload['degree']}")
        for p in payload["points"]:
            click.echo(
                f"  point (-({p['b']}) + sqrt(-{p['d']}))/(2*{p['a']})"
                f"  mult {p['mult']}  stab {p['stab']}  form {p['form']}"
            )

    _run_guarded(go)


@main.command("eisenstein")
@click.option("--series", type=click.Choice(["hurwitz", "ek", "cohen"]), required=True)
@click.option("--max", "truncation", required=True, type=int)
@click.option("--weight", type=int, default=None,
              help="Weight k for ek; the parameter s (weight s+1/2) for cohen.")
@click.option("--json", "as_json", is_flag=True)
def eisenstein_cmd(series, truncation, weight, as_json):
    """Eisenstein coefficient tables: Hurwitz H(d), E_k, or Cohen H(s, n)."""

    def go():
        if series == "hurwitz":
            table = eisenstein.hurwitz_table(truncation)
            payload = table.to_json_dict()
            if as_json:
                click.echo(json.dumps(payload, sort_keys=True, indent=2))
                return
            for dd, v in sorted(table.values.items()):
                click.echo(f"H({dd}) = {v}")
            return
        if weight is None:
            raise click.UsageError(f"--weight is required for --series {series}")
        qs = (
            eisenstein.eisenstein_k(weight, truncation)
            if series == "ek"
            else eisenstein.cohen(weight, truncation)
        )
        if as_json:
            click.echo(json.dumps(qs.to_json_dict(), sort_keys=True, indent=2))
        else:
            click.echo(qs.text())

    _run_guarded(go)


@main.command("density")
@click.option("--lattice", "spec", required=True)
@click.option("--prime", "p", required=True, type=int)
@click.option("--m", "m", required=True, type=int)
@click.option("--max-level", type=int, default=None)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def density_cmd(ctx, spec, p, m, max_level, as_json):
    """Local representation density report at one prime."""

    def go():
        lat = _resolve_lattice(spec)
        cache = _cache_from_ctx(ctx)
        payload = cache.fetch_or_compute(
            "density",
            {
                "gram": [list(r) for r in lat.gram],
                "p": p,
                "m": m,
                "max_level": max_level,
            },
            lambda: eisenstein.local_density(lat, p, m, max_level).to_json_dict(),
        )
        if as_json:
            click.echo(json.dumps(payload, sort_keys=True, indent=2))
            return
        click.echo(
            f"alpha_{payload['p']}({payload['m']}): stabilized {payload['stabilized']}"
            f" (threshold k0={payload['threshold']})"
        )
        for k, v in payload["approximations"]:
            click.echo(f"  level {k}: {v}")

    _run_guarded(go)


@main.command("verify")
@click.option("--suite", type=click.Choice(SUITE_NAMES), default="all")
@click.option("--json", "as_json", is_flag=True)
def verify_cmd(suite, as_json):
    """Run a reproduction suite; exit code 0 iff every case passes."""

    def go():
        if suite == "volume":
            reports = [suite_volume_formula()]
        elif suite == "siegelweil":
            reports = [suite_siegel_weil()]
        elif suite == "cup":
            reports = [suite_cup_product("A2"), suite_cup_product("E8")]
        elif suite == "weilrep":
            reports = [suite_weilrep()]
        else:
            reports = suite_all()
        if as_json:
            click.echo(reports_to_json(reports))
        else:
            for rep in reports:
                for line in rep.text_lines():
                    click.echo(line)
        if not all(r.passed for r in reports):
            sys.exit(1)

    _run_guarded(go)


if __name__ == "__main__":
    main()
