import functools
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from enum import StrEnum
from pathlib import Path

import typer
from rich.console import Console
from rich.table import Table

import logging_config  # pyright: ignore[reportMissingImports]
from drh import DRHError
from drh.ansatz import ansatz_solve
from drh.catalog import CATALOG, get_cohft
from drh.catalog.cohft import CohFTSpec, verify_printed
from drh.catalog.manifest import save_manifest
from drh.catalog.wk import wk_correlators
from drh.config import default_caps
from drh.genus import lemma_genus1, verify_dz_genus1, verify_dz_hierarchy
from drh.hierarchy import run_suites
from drh.miura import normal_coordinates
from drh.models.caps import ComputationCaps
from drh.models.report import Report
from drh.solution.checks import (
    CHECKS,
    check_dilaton,
    check_divisor,
    check_homogeneity,
    check_string,
    check_vanishing,
)
from drh.solution.potential import (
    PotentialSeries,
    apply_tau_shift,
    dr_potential,
    format_key,
    potential_from_table,
    potentials_equal,
    wk_potential,
)
from drh.solution.reduced import reduced_potential
from drh.solution.string import solve_string

logger = logging.getLogger("drh.cli")
console = Console()

app = typer.Typer(help="Hierarquias DR e tau-simétricas em aritmética exata.")
catalog_app = typer.Typer(help="Teorias do catálogo.")
app.add_typer(catalog_app, name="catalog")

HIERARCHY_SUITES = ("string", "commute", "tau", "two-point", "homogeneity", "normal")


class OutputFormat(StrEnum):
    TEXT = "text"
    JSON = "json"


# opções comuns -------------------------------------------------------------

CohFTOption = typer.Option("kdv", "--cohft", help="Nome no catálogo ou manifesto JSON")
EpsOption = typer.Option(None, "--eps", help="Maior potência de ε")
PmaxOption = typer.Option(None, "--pmax", help="Maior descendente d de ḡ_{α,d}")
TdegOption = typer.Option(None, "--tdeg", help="Grau máximo nos tempos")
UdegOption = typer.Option(None, "--udeg", help="Grau máximo em u")
StrictOption = typer.Option(False, "--strict-caps", help="Erro em vez de truncamento")
OutOption = typer.Option(None, "--out", help="Arquivo de saída")
FormatOption = typer.Option(OutputFormat.TEXT, "--format", help="text ou json")


def _caps(
    eps: int | None = None,
    pmax: int | None = None,
    tdeg: int | None = None,
    udeg: int | None = None,
    strict: bool = False,
) -> ComputationCaps:
    return default_caps().override(
        eps_cap=eps,
        p_max=pmax,
        t_degree_cap=tdeg,
        u_degree_cap=udeg,
        strict=strict or None,
    )


def _handled(command):
    """Erros do pacote viram mensagem vermelha e código de saída 2."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except DRHError as ex:
            logger.debug("Falha em %s", command.__name__, exc_info=True)
            console.print(f"[red]Erro:[/red] {ex}")
            raise typer.Exit(2) from ex

    return wrapper


def _split(names: str, allowed: tuple[str, ...], what: str) -> list[str]:
    chosen = [n.strip() for n in names.split(",") if n.strip()]
    unknown = [n for n in chosen if n not in allowed]
    if unknown:
        raise DRHError(f"{what} desconhecida(s): {', '.join(unknown)}")
    return chosen


def _write(text: str, out: Path | None):
    if out is None:
        typer.echo(text)
        return
    out.write_text(text + "\n", encoding="utf-8")
    logger.info("Saída gravada em %s", out)


def _report_table(report: Report) -> Table:
    table = Table(title=report.title)
    table.add_column("status")
    table.add_column("suíte")
    table.add_column("chave")
    table.add_column("detalhe")
    table.add_column("testemunha", overflow="fold")
    for r in report.results:
        color = "green" if r.passed else "red"
        table.add_row(
            f"[{color}]{r.status.upper()}[/{color}]",
            r.suite,
            r.key,
            r.detail,
            r.witness or "",
        )
    return table


def _finish(report: Report, fmt: OutputFormat, out: Path | None = None):
    if fmt == OutputFormat.JSON:
        _write(report.to_json(), out)
    else:
        if out is not None:
            _write(report.to_text(), out)
        console.print(_report_table(report))
        console.print(report.summary())
    raise typer.Exit(0 if report.passed else 1)


def _potential_table(F: PotentialSeries) -> Table:
    table = Table(title=repr(F))
    table.add_column("correlator")
    table.add_column("valor", overflow="fold")
    for key, value in F.items():
        table.add_row(format_key(key), value.to_string())
    return table


def _run_suite(args) -> Report:
    H, name, euler, theta = args
    return run_suites(H, [name], euler=euler, theta=theta)


# comandos ------------------------------------------------------------------


@app.callback()
def main(ctx: typer.Context):
    logging_config.command_name.set(ctx.invoked_subcommand)


@app.command()
@_handled
def verify(
    cohft: str = CohFTOption,
    suite: str = typer.Option("string,commute,tau", "--suite", help="Suítes separadas por vírgula"),
    printed: bool = typer.Option(False, "--printed", help="Compara as expressões impressas"),
    jobs: int = typer.Option(1, "--jobs", help="Processos para rodar as suítes"),
    eps: int | None = EpsOption,
    pmax: int | None = PmaxOption,
    udeg: int | None = UdegOption,
    strict_caps: bool = StrictOption,
    out: Path | None = OutOption,
    fmt: OutputFormat = FormatOption,
):
    """
    Constrói a hierarquia e roda as suítes de verificação.

    Exemplos:
        uv run drh verify --cohft 4spin --suite commute,tau --pmax 3
        uv run drh verify --cohft hodge --eps 6 --printed
    """
    caps = _caps(eps, pmax, None, udeg, strict_caps)
    spec = get_cohft(cohft, caps)
    names = _split(suite, HIERARCHY_SUITES, "Suíte")
    H = spec.hierarchy(caps)
    euler = spec.euler if "homogeneity" in names else None
    if "homogeneity" in names:
        spec.require_euler()
    theta = spec.theta() if euler is not None and any(euler.b) else None

    report = Report(f"verify {spec.name}")
    work = [(H, name, euler, theta) for name in names]
    if jobs > 1 and len(work) > 1:
        # map preserva a ordem das suítes
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            partials = list(pool.map(_run_suite, work))
    else:
        partials = [_run_suite(item) for item in work]
    for partial in partials:
        report.extend(partial)
    if printed:
        report.extend(verify_printed(spec, H))
    logger.info("verify %s: %s", spec.name, report.summary())
    _finish(report, fmt, out)


@app.command()
@_handled
def build(
    cohft: str = CohFTOption,
    eps: int | None = EpsOption,
    pmax: int | None = PmaxOption,
    udeg: int | None = UdegOption,
    strict_caps: bool = StrictOption,
    out: Path | None = OutOption,
    fmt: OutputFormat = FormatOption,
):
    """
    Imprime as densidades g_{α,d} da hierarquia.

    Exemplos:
        uv run drh build --cohft kdv --eps 4 --pmax 2
    """
    caps = _caps(eps, pmax, None, udeg, strict_caps)
    spec = get_cohft(cohft, caps)
    H = spec.hierarchy(caps)
    rows = [
        (alpha, d, H.density(alpha, d).to_string())
        for d in range(H.levels + 1)
        for alpha in range(1, H.n + 1)
    ]
    if fmt == OutputFormat.JSON:
        data = {
            "name": spec.name,
            "g11": H.hamiltonian(1, 1).to_string() if H.levels >= 1 else None,
            "densities": [{"alpha": a, "d": d, "density": text} for a, d, text in rows],
        }
        _write(json.dumps(data, indent=2, ensure_ascii=False), out)
        return
    table = Table(title=f"{spec.name}: densidades g_(α,d)")
    table.add_column("α")
    table.add_column("d")
    table.add_column("g", overflow="fold")
    for alpha, d, text in rows:
        table.add_row(spec.labels[alpha - 1], str(d), text)
    console.print(table)
    if out is not None:
        _write("\n".join(f"g[{a},{d}] = {text}" for a, d, text in rows), out)


@app.command()
@_handled
def potential(
    cohft: str = CohFTOption,
    genus: int = typer.Option(1, "--genus", help="Gênero máximo"),
    tau_shift: bool = typer.Option(False, "--tau-shift", help="Aplica 𝒬 da teoria (F^DR ↦ F)"),
    pmax: int | None = PmaxOption,
    tdeg: int | None = TdegOption,
    udeg: int | None = UdegOption,
    strict_caps: bool = StrictOption,
    out: Path | None = OutOption,
    fmt: OutputFormat = FormatOption,
):
    """
    Calcula o potencial F^DR pela solução string.

    Exemplos:
        uv run drh potential --cohft kdv --genus 2 --tdeg 6 --out fdr.json
        uv run drh potential --cohft hodge --genus 2 --tau-shift
    """
    caps = _caps(2 * genus, pmax, tdeg, udeg, strict_caps)
    spec = get_cohft(cohft, caps)
    H = spec.hierarchy(caps)
    sol = solve_string(H)
    F = dr_potential(H, sol)
    if tau_shift:
        if spec.tau_shift is None:
            raise DRHError(f"{spec.name} não tem gerador 𝒬")
        F = apply_tau_shift(F, spec.tau_shift.recast(H.ctx), sol)
    if out is not None:
        F.save(out)
        logger.info("Potencial de %s salvo em %s", spec.name, out)
    if fmt == OutputFormat.JSON:
        if out is None:
            typer.echo(F.to_json())
        return
    console.print(_potential_table(F))


def _input_potential(
    source: str,
    spec: CohFTSpec,
    genus: int,
    points: int,
    degree: int,
) -> PotentialSeries:
    if source == "wk":
        return wk_potential(genus, degree, points)
    if source == "catalog":
        if spec.correlators is None:
            raise DRHError(f"{spec.name} não tem tabela de correlatores")
        ctx = spec.ctx.with_caps(eps_cap=2 * genus)
        return potential_from_table(spec.correlators, ctx, genus, points, degree, spec.name)
    return PotentialSeries.load(source)


@app.command()
@_handled
def reduce(
    cohft: str = CohFTOption,
    correlators: str = typer.Option("wk", "--correlators", help="wk, catalog ou arquivo JSON"),
    compare: Path | None = typer.Option(None, "--compare", help="Potencial para comparar; padrão: F^DR"),
    genus: int = typer.Option(2, "--genus", help="Gênero máximo"),
    points: int = typer.Option(8, "--points", help="Pontos do potencial de entrada"),
    degree: int = typer.Option(6, "--degree", help="Descendente máximo da entrada"),
    pmax: int | None = PmaxOption,
    tdeg: int | None = TdegOption,
    udeg: int | None = UdegOption,
    strict_caps: bool = StrictOption,
    out: Path | None = OutOption,
    fmt: OutputFormat = FormatOption,
):
    """
    Calcula o potencial reduzido e compara com F^DR.

    Exemplos:
        uv run drh reduce --cohft kdv --correlators wk --compare fdr.json
        uv run drh reduce --cohft kdv --genus 1 --points 6
    """
    caps = _caps(2 * genus, pmax, tdeg, udeg, strict_caps)
    spec = get_cohft(cohft, caps)
    F = _input_potential(correlators, spec, genus, points, degree)
    reduced, P = reduced_potential(F, spec, caps)
    if compare is not None:
        target = PotentialSeries.load(compare)
    else:
        target = dr_potential(spec.hierarchy(caps))
    report = potentials_equal(reduced, target)
    report.title = f"reduce {spec.name}"
    report.add("reduce", "P", True, detail=P.to_string() or "0")
    if out is not None:
        reduced.save(out)
    if fmt == OutputFormat.TEXT:
        console.print(f"𝒫 = {P.to_string() or '0'}")
    _finish(report, fmt)


@app.command()
@_handled
def genus1(
    cohft: str = CohFTOption,
    pmax: int | None = PmaxOption,
    udeg: int | None = UdegOption,
    strict_caps: bool = StrictOption,
    fmt: OutputFormat = FormatOption,
):
    """
    Correção de gênero 1 do lema e comparação com os dados DZ.

    Exemplos:
        uv run drh genus1 --cohft 3spin --pmax 2
    """
    caps = _caps(2, pmax, None, udeg, strict_caps)
    spec = get_cohft(cohft, caps)
    F = spec.frobenius(caps)
    correction = lemma_genus1(F)
    if fmt == OutputFormat.TEXT:
        console.print(f"ḡ^[2] = {correction.to_string() or '0'}")
    report = Report(f"genus1 {spec.name}")
    if spec.euler is not None:
        report.extend(verify_dz_genus1(F))
    else:
        logger.warning("%s sem campo de Euler: comparação DZ omitida", spec.name)
    if spec.g_function is not None and not spec.g_function.is_zero():
        report.extend(verify_dz_hierarchy(spec.hierarchy(caps), spec.g_function))
    report.add("genus1", "lemma", True, detail=correction.to_string())
    _finish(report, fmt)


@app.command()
@_handled
def ansatz(
    cohft: str = CohFTOption,
    levels: int = typer.Option(2, "--levels", help="Níveis da recursão impostos"),
    udeg: int | None = UdegOption,
    fmt: OutputFormat = FormatOption,
):
    """
    Deformações ε² de ∫f compatíveis com a recursão DR.

    Exemplos:
        uv run drh ansatz --cohft i2-5 --levels 2
    """
    caps = _caps(2, None, None, udeg)
    spec = get_cohft(cohft, caps)
    result = ansatz_solve(spec.frobenius(caps), caps=caps, levels=levels)
    particular = result.particular_functional().to_string()
    basis = result.to_strings()
    if fmt == OutputFormat.JSON:
        data = {"name": spec.name, "particular": particular, "basis": basis}
        typer.echo(json.dumps(data, indent=2, ensure_ascii=False))
        return
    console.print(f"{spec.name}: dimensão {result.dimension}")
    console.print(f"particular: {particular or '0'}")
    for i, text in enumerate(basis):
        console.print(f"base[{i}]: {text}")


@app.command("normal-coords")
@_handled
def normal_coords(
    cohft: str = CohFTOption,
    eps: int | None = EpsOption,
    pmax: int | None = PmaxOption,
    udeg: int | None = UdegOption,
    fmt: OutputFormat = FormatOption,
):
    """
    Coordenadas normais ũ^α = η^{αμ}h_{μ,−1}.

    Exemplos:
        uv run drh normal-coords --cohft cp1 --eps 2
    """
    caps = _caps(eps, pmax, None, udeg)
    spec = get_cohft(cohft, caps)
    images = normal_coordinates(spec.hierarchy(caps)).to_strings()
    if fmt == OutputFormat.JSON:
        typer.echo(json.dumps({"name": spec.name, "images": images}, indent=2, ensure_ascii=False))
        return
    for label, text in zip(spec.labels, images, strict=True):
        console.print(f"ũ^{label} = {text}")


@app.command()
@_handled
def wk(
    genus: int = typer.Option(2, "--genus", help="Gênero máximo"),
    points: int = typer.Option(3, "--points", help="Número máximo de pontos"),
    degree: int = typer.Option(7, "--degree", help="Descendente máximo"),
    out: Path | None = OutOption,
    fmt: OutputFormat = FormatOption,
):
    """
    Números de interseção ⟨τ_{d₁}…τ_{d_n}⟩_g pela recursão DVV.

    Exemplos:
        uv run drh wk --genus 3 --points 1 --degree 7
    """
    table = wk_correlators(genus, points, degree)
    rows = [
        {"genus": g, "degrees": [d for _, d in ins], "value": str(v)}
        for (g, ins), v in table.items()
    ]
    if fmt == OutputFormat.JSON:
        _write(json.dumps(rows, indent=2), out)
        return
    view = Table(title="Witten–Kontsevich")
    view.add_column("g")
    view.add_column("τ")
    view.add_column("valor")
    for row in rows:
        view.add_row(str(row["genus"]), " ".join(f"τ{d}" for d in row["degrees"]), row["value"])
    console.print(view)
    if out is not None:
        _write(json.dumps(rows, indent=2), out)


@app.command()
@_handled
def check(
    cohft: str = CohFTOption,
    checks: str = typer.Option("string,dilaton,vanishing", "--checks", help="Verificações do potencial"),
    genus: int = typer.Option(1, "--genus", help="Gênero máximo"),
    pmax: int | None = PmaxOption,
    tdeg: int | None = TdegOption,
    udeg: int | None = UdegOption,
    strict_caps: bool = StrictOption,
    out: Path | None = OutOption,
    fmt: OutputFormat = FormatOption,
):
    """
    Equações string, dilaton, divisor, homogeneidade e anulamentos de F^DR.

    Exemplos:
        uv run drh check --cohft kdv --genus 2 --tdeg 5
        uv run drh check --cohft cp1 --checks divisor,homogeneity
    """
    names = _split(checks, CHECKS, "Verificação")
    caps = _caps(2 * genus, pmax, tdeg, udeg, strict_caps)
    spec = get_cohft(cohft, caps)
    F = dr_potential(spec.hierarchy(caps))
    report = Report(f"check {spec.name}")
    for name in names:
        if name == "string":
            report.extend(check_string(F, spec.metric))
        elif name == "dilaton":
            report.extend(check_dilaton(F))
        elif name == "divisor":
            report.extend(check_divisor(F, spec.metric, spec.require_divisor(), spec.theta()))
        elif name == "homogeneity":
            report.extend(check_homogeneity(F, spec.metric, spec.require_euler(), spec.theta()))
        else:
            report.extend(check_vanishing(F))
    _finish(report, fmt, out)


@catalog_app.command("list")
@_handled
def catalog_list():
    """
    Lista as teorias embutidas.

    Exemplos:
        uv run drh catalog list
    """
    caps = default_caps()
    table = Table(title="Catálogo")
    table.add_column("nome")
    table.add_column("N")
    table.add_column("descrição")
    for name in CATALOG.names():
        if name in CATALOG:
            spec = CATALOG.get_by_name(name, caps)
            table.add_row(name, str(spec.n), spec.description)
        else:
            table.add_row(name, "2", "Família I₂(k−1), k ≥ 3")
    console.print(table)


@catalog_app.command("show")
@_handled
def catalog_show(
    name: str = typer.Argument(..., help="Nome da teoria"),
    out: Path | None = typer.Option(None, "--out", help="Salva o manifesto JSON"),
):
    """
    Mostra os dados de uma teoria e, opcionalmente, exporta o manifesto.

    Exemplos:
        uv run drh catalog show 3spin
        uv run drh catalog show cp1 --out cp1.json
    """
    spec = get_cohft(name, default_caps())
    console.print(f"[bold]{spec.name}[/bold] N={spec.n} ({', '.join(spec.labels)})")
    console.print(spec.description)
    console.print(f"η = {[[str(c) for c in row] for row in spec.metric.lower]}")
    console.print(f"f = {spec.potential.to_string()}")
    if spec.euler is not None:
        a = ", ".join(str(x) for x in spec.euler.a)
        console.print(f"Euler: a = ({a}), δ = {spec.euler.delta}")
    if spec.divisor is not None:
        console.print(f"divisor: e{spec.divisor.gamma}, {spec.divisor.pairing}")
    for item in spec.printed:
        console.print(f"impresso {item.label} (ε^{item.eps_order}): {item.text}")
    if spec.correlators is not None:
        console.print(f"{len(spec.correlators)} correlatores tabelados")
    if out is not None:
        save_manifest(spec, out)


def run():
    logging_config.setup_logging()
    app()


if __name__ == "__main__":
    run()
