"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a failed check, 2 on a
capability error or malformed input.  JSON output carries ``"schema": 1`` and
is byte-identical for identical flags.
"""

from __future__ import annotations

import itertools
import json
import random
import sys
from pathlib import Path

import click

from .cartan_roots import CapabilityError, CartanData, cartan_from_matrix, cartan_preset, height, positive_roots, preset_names
from .convex_orders import FromCharge, FromWord, OrderError, parse_charge
from .word_characters import Character, geometric_lusztig_data, parse_word, semicuspidal_decomposition

SCHEMA = 1

# expected sl2-hat example values
GOLDEN_SL2HAT = {
    "semisimple": {"dim_M": 6, "semisimple": True, "summands": [5, 1], "dim_L2": 5, "ch_L2": "4w[0011]+w[0101]"},
    "modular": {"dim_M": 6, "indecomposable": True, "loewy_length": 3, "dim_L2": 4, "ch_L2": "4w[0011]", "L2_cuspidal": True},
}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        click.echo(text.rstrip("\n"))


def parse_cartan(text: str) -> CartanData:
    """A preset name, or a matrix written ``2,-1;-1,2``."""
    if ";" in text or "," in text:
        try:
            rows = [[int(x) for x in row.split(",")] for row in text.split(";")]
        except ValueError as exc:
            raise click.BadParameter(f"cannot read Cartan matrix {text!r}") from exc
        try:
            return cartan_from_matrix(rows)
        except (ValueError, CapabilityError) as exc:
            raise click.BadParameter(str(exc)) from exc
    try:
        return cartan_preset(text)
    except KeyError as exc:
        raise click.BadParameter(f"unknown preset {text!r}; choose from {', '.join(preset_names())}") from exc


def _read_character(arg: str) -> Character:
    p = Path(arg)
    text = p.read_text() if arg != "-" and p.is_file() else (sys.stdin.read() if arg == "-" else arg)
    text = text.strip()
    try:
        if text.startswith("{"):
            return Character.from_json(text)
        return Character.parse(text)
    except (ValueError, KeyError) as exc:
        raise click.BadParameter(f"cannot read a character from {arg!r}: {exc}") from exc


def _charge(cartan: CartanData, text: str | None, seed: int):
    from .verify import default_charge, random_generic_charge

    if text is None:
        return default_charge(cartan)
    if text == "random":
        roots = [e.root for e in positive_roots(cartan, 8)]
        return random_generic_charge(cartan, roots, random.Random(seed))
    try:
        c = parse_charge(text)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc
    if len(c.re) != cartan.rank:
        raise click.BadParameter(f"charge needs {cartan.rank} values, got {len(c.re)}")
    return c


class _Group(click.Group):
    """Maps library capability errors to exit code 2."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except CapabilityError as exc:
            click.echo(f"capability error: {exc}", err=True)
            ctx.exit(2)


def _load_config(ctx, _param, value):
    if value:
        try:
            data = json.loads(Path(value).read_text())
        except (OSError, ValueError) as exc:
            raise click.BadParameter(f"cannot read config {value}: {exc}") from exc
        ctx.default_map = {**(ctx.default_map or {}), **data}
    return value


@click.group(cls=_Group)
@click.option("--config", type=click.Path(dir_okay=False), callback=_load_config, is_eager=True, expose_value=False,
              help="JSON file of per-command defaults, e.g. {\"verify\": {\"cartan\": \"B2\"}}.")
def main():
    """Crystals, KLR characters and MV polytopes for small Cartan types."""


cartan_opt = click.option("--cartan", "cartan_text", default="A2", show_default=True, help="Preset name or matrix '2,-1;-1,2'.")
out_opt = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write output here instead of stdout.")
seed_opt = click.option("--seed", type=int, default=0, show_default=True)


# enumerate -------------------------------------------------------------------------


@main.command()
@cartan_opt
@click.option("--depth", type=click.IntRange(min=0), default=3, show_default=True, help="Maximal height.")
@out_opt
@click.option("--resume", is_flag=True, help="Skip heights already recorded in the manifest next to --out.")
def enumerate(cartan_text, depth, out, resume):
    """Crystal elements of B(-infinity) as JSONL, one element per line."""
    from .crystal_engine import crystal_for

    cartan = parse_cartan(cartan_text)
    cr = crystal_for(cartan)
    seq = list(cartan.nodes)
    manifest_path = Path(out + ".manifest.json") if out else None
    done: dict[str, int] = {}
    if resume and manifest_path and manifest_path.exists():
        done = json.loads(manifest_path.read_text()).get("counts", {})
    by_h = cr.enumerate(depth)
    stream = open(out, "a" if resume and done else "w") if out else sys.stdout
    try:
        for h in range(depth + 1):
            if str(h) in done:
                continue
            rows = []
            for b in by_h.get(h, []):
                rows.append({
                    "schema": SCHEMA,
                    "height": h,
                    "weight": list(cr.wt(b)),
                    "element": cr.to_json(b),
                    "string_data": cr.string_data(b, itertools.cycle(seq)),
                })
            rows.sort(key=lambda r: (r["weight"], _dump(r["element"])))
            for r in rows:
                stream.write(_dump(r) + "\n")
            stream.flush()
            done[str(h)] = len(rows)
            if manifest_path:
                manifest_path.write_text(_dump({"schema": SCHEMA, "type": cartan.name, "depth": depth, "counts": done}) + "\n")
    finally:
        if out:
            stream.close()
    if out:
        click.echo(f"{sum(done.values())} elements", err=True)


# decompose ---------------------------------------------------------------------------


@main.command()
@click.argument("character")
@cartan_opt
@click.option("--charge", "charge_text", default=None, help="One complex value per node, e.g. '1+i,-1+i', or 'random'.")
@seed_opt
@out_opt
def decompose(character, cartan_text, charge_text, seed, out):
    """Semi-cuspidal decomposition of a simple character (text, JSON or a file)."""
    from .klr_diagrams import oracle_simples

    cartan = parse_cartan(cartan_text)
    ch = _read_character(character)
    c = _charge(cartan, charge_text, seed)
    known = None
    try:
        known = oracle_simples(cartan, height(ch.weight(cartan)))
    except CapabilityError:
        pass
    try:
        dec = semicuspidal_decomposition(ch, c, cartan, known)
    except ValueError as exc:
        click.echo(f"decomposition failed: {exc}", err=True)
        sys.exit(1)
    doc = {"schema": SCHEMA, "type": cartan.name, "character": str(ch), "charge": c.to_json(), **dec.to_json()}
    _emit(_dump(doc), out)


# polytope ------------------------------------------------------------------------------


def _figure(P, cartan, render):
    from .polytope_assembly import render_svg, render_tikz

    return render_svg(P, cartan) if render == "svg" else render_tikz(P, cartan)


@main.command()
@cartan_opt
@click.option("--element", default=None, help="Crystal element as JSON (as printed by 'enumerate').")
@click.option("--character", default=None, help="Simple character (text, JSON or a file).")
@click.option("--render", type=click.Choice(["svg", "tikz"]), default=None)
@click.option("--check", is_flag=True, help="Run the 2-face checks; exit 1 on a violation.")
@click.option("--order-word", default=None, help="Also report Lusztig data along this reduced word order.")
@click.option("--charge", "charge_text", default=None, help="Also report Lusztig data along this charge order.")
@seed_opt
@out_opt
def polytope(cartan_text, element, character, render, check, order_word, charge_text, seed, out):
    """MV polytope of a crystal element or of a simple character."""
    from .crystal_engine import crystal_for
    from .polytope_assembly import check_polytope, klr_polytope_from_character, polytope_from_crystal, underlying

    cartan = parse_cartan(cartan_text)
    if (element is None) == (character is None):
        raise click.UsageError("give exactly one of --element and --character")
    if element is not None:
        cr = crystal_for(cartan)
        try:
            b = cr.from_json(json.loads(element))
        except (ValueError, KeyError, TypeError) as exc:
            raise click.BadParameter(f"bad element: {exc}") from exc
        P = polytope_from_crystal(b, cr)
    else:
        P = klr_polytope_from_character(_read_character(character), cartan, seed=seed)
    doc = P.to_json() if hasattr(P, "to_json") else {}
    doc["schema"] = SCHEMA
    doc["type"] = cartan.name
    poly = underlying(P)
    try:
        if order_word:
            d = geometric_lusztig_data(poly, FromWord(cartan, parse_word(order_word)))
            doc["lusztig_data_word"] = [{"root": list(r), "value": v} for r, v in d.items()]
        if charge_text:
            d = geometric_lusztig_data(poly, FromCharge(cartan, _charge(cartan, charge_text, seed)))
            doc["lusztig_data_charge"] = [{"root": list(r), "value": v} for r, v in d.items()]
    except OrderError as exc:
        raise click.BadParameter(str(exc)) from exc
    status = 0
    if check or render:
        shape = P.polytope if hasattr(P, "labels") else P
        rep = check_polytope(shape, cartan)
        doc["check"] = rep.to_json()
        status = 0 if rep.ok else 1
    if render and status == 0:
        fig = _figure(P if not hasattr(P, "labels") else poly, cartan, render)
        if out:
            Path(out).parent.mkdir(parents=True, exist_ok=True)
            Path(out).with_suffix("." + render).write_text(fig)
        else:
            doc["figure"] = fig
    elif render:
        click.echo("polytope failed its checks; no figure written", err=True)
    _emit(_dump(doc), out)
    sys.exit(status)


# render ----------------------------------------------------------------------------------


def polytope_from_json(doc: dict, cartan: CartanData):
    from .geometry import PseudoWeylPolytope
    from .polytope_assembly import DecoratedAffinePolytope, _lookup
    from .affine_rank2 import Partition

    pts = [tuple(v) for v in doc["vertices"]]
    P = PseudoWeylPolytope(pts, _lookup(cartan, max(height(p) for p in pts)))
    if doc.get("partitions"):
        parts = {tuple(x["coweight"]): Partition(x["partition"]) for x in doc["partitions"]}
        return DecoratedAffinePolytope(cartan, P, parts)
    return P


@main.command()
@click.argument("polytope_json", type=click.File("r"))
@cartan_opt
@click.option("--render", type=click.Choice(["svg", "tikz"]), default="svg", show_default=True)
@out_opt
def render(polytope_json, cartan_text, render, out):
    """Draw a polytope JSON file; refuses polytopes that fail their checks."""
    from .polytope_assembly import check_polytope

    cartan = parse_cartan(cartan_text)
    try:
        doc = json.load(polytope_json)
        P = polytope_from_json(doc, cartan)
    except (ValueError, KeyError, TypeError) as exc:
        raise click.BadParameter(f"bad polytope JSON: {exc}") from exc
    rep = check_polytope(P, cartan)
    if not rep.ok:
        click.echo(_dump({"schema": SCHEMA, "check": rep.to_json()}), err=True)
        sys.exit(1)
    _emit(_figure(P, cartan, render), out)


# verify ------------------------------------------------------------------------------------


@main.command()
@click.argument("suite", type=click.Choice(["crystal-axioms", "counts", "two-faces", "character-polytopes", "reversal", "convex-orders", "paths"]))
@cartan_opt
@click.option("--depth", type=click.IntRange(min=1), default=6, show_default=True)
@click.option("--mutations", type=click.IntRange(min=0), default=1000, show_default=True)
@click.option("--charges", type=click.IntRange(min=1), default=100, show_default=True, help="Charges per polytope (paths).")
@seed_opt
@out_opt
def verify(suite, cartan_text, depth, mutations, charges, seed, out):
    """Run a verification suite; exit 1 on any failure."""
    from . import verify as V

    cartan = parse_cartan(cartan_text)
    if suite == "crystal-axioms":
        rep = V.suite_crystal_axioms(cartan, depth)
    elif suite == "counts":
        rep = V.suite_counts(cartan, depth)
    elif suite == "two-faces":
        rep = V.suite_two_faces(cartan, depth, mutations=mutations, seed=seed)
    elif suite == "character-polytopes":
        rep = V.suite_character_polytopes(cartan, depth)
    elif suite == "reversal":
        rep = V.suite_reversal(cartan, max_n=depth)
    elif suite == "convex-orders":
        rep = V.suite_convex_orders((cartan.name,))
    else:
        rep = V.suite_paths((cartan.name,), depth=depth, charges=charges, seed=seed)
    _emit(_dump(rep.to_json()), out)
    click.echo(f"{rep.name}: {'pass' if rep.ok else 'FAIL'} ({rep.checked} checked, {len(rep.failures)} failures)", err=True)
    sys.exit(0 if rep.ok else 1)


# the sl2-hat example -------------------------------------------------------------------------


def _golden_case(q: int, field: int) -> str | None:
    """Which known outcome applies: q = 0 in the field is the modular case."""
    if (q % field == 0) if field else q == 0:
        return "modular"
    if (q, field) == (-2, 0):
        return "semisimple"
    return None


def _golden_diff(doc: dict, golden: dict) -> list[str]:
    return [f"{k}: expected {v!r}, got {doc.get(k)!r}" for k, v in golden.items() if doc.get(k) != v]


@main.command("example-sl2hat")
@click.option("--q", "q", type=int, default=-2, show_default=True, help="Parameter of Q_01 = u^2 + q uv + v^2.")
@click.option("--field", "field", type=int, default=0, show_default=True, help="Characteristic (0 for the rationals).")
@out_opt
def example_sl2hat_cmd(q, field, out):
    """The square of the weight-delta simple over affine sl2, checked against known values."""
    from .klr_diagrams import example_sl2hat

    if field and field < 2:
        raise click.BadParameter("field characteristic must be 0 or a prime")
    rep = example_sl2hat(q, field or None)
    doc = rep.to_json()
    diffs = []
    case = _golden_case(q, field)
    if case:
        diffs = _golden_diff(doc, GOLDEN_SL2HAT[case])
    for k in ("rewrite_identity", "relations_ok"):
        if not doc.get(k):
            diffs.append(f"{k} failed")
    doc["golden"] = {"case": case, "diffs": diffs}
    for line in rep.lines():
        click.echo(line, err=True)
    _emit(_dump(doc), out)
    sys.exit(1 if diffs else 0)


if __name__ == "__main__":
    main()
