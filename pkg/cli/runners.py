"""
批处理: 谱域扫描, 空域求值, 校验套件, 代数自检。

独立的 k_rho / 目标点交给 ThreadPoolExecutor.map, 输出顺序与输入顺序一致。
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from functools import partial

import numpy as np

from basis_algebra.basis import decompose, degenerate_threshold, realize
from basis_algebra.models import BasisCoefficients, SpectralPoint
from basis_algebra.products import multiply_in_basis, product_residuals, selfcheck_points
from core.conf import green_settings
from core.exceptions import BranchPoint, NonConvergent, SingularSystem
from elastic.assembly import assemble_G_elastic
from elastic.models import SourceKind
from elastic.residuals import acoustic_identity_residuals, elastic_interface_residuals
from elastic.solver import solve_elastic_spectral
from hankel.models import GreenKind, QuadratureSpec
from hankel.spatial import spatial_green
from maxwell.assembly import assemble, b_profile
from maxwell.models import FieldKind
from maxwell.residuals import b3_identity_residual, em_interface_residuals, rotation_residual
from maxwell.solver import solve_em_spectral
from oracle.crosscheck import elastic_cross_check, em_cross_check
from stack.models import Phase
from stack.wavenumbers import locate_layer, max_wavenumber
from .models import CheckReport, CheckResult, Problem, RowStatus

logger = logging.getLogger(__name__)

ENTRIES = [f'{i}{j}' for i in range(1, 4) for j in range(1, 4)]


def complex_columns(names):
    return [f'{part}_{name}' for name in names for part in ('Re', 'Im')]


def split_complex(values):
    out = []
    for value in np.asarray(values, dtype=complex).reshape(-1):
        out.extend((float(value.real), float(value.imag)))
    return out


def run_ordered(function, items, threads=1):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(function, items))


def _coefficient_names(config):
    if config.problem == Problem.ELASTIC_VECTOR:
        return ['c2', 'c3', 'c7']
    if config.problem == Problem.MAXWELL and config.field == FieldKind.GH:
        return [f'c{l}' for l in range(1, 10)]
    return [f'c{l}' for l in range(1, 6)]


def _field_names(config):
    if config.problem == Problem.ELASTIC_VECTOR:
        return ['u1', 'u2', 'u3']
    prefix = config.field if config.problem == Problem.MAXWELL else 'G'
    return [f'{prefix}{e}' for e in ENTRIES]


def spectral_header(config):
    header = ['k_rho', 'z'] + complex_columns(_coefficient_names(config)) + complex_columns(_field_names(config))
    if config.problem == Problem.MAXWELL:
        header += complex_columns(['b1', 'b2', 'b3'])
    return header + ['status']


def _spectral_values(config, k_rho):
    """一个 k_rho 上所有深度的数值列 (不含 k_rho, z, status)"""
    point = SpectralPoint.from_polar(k_rho, config.alpha)
    size = len(_coefficient_names(config))
    rows = []
    if config.problem == Problem.MAXWELL:
        sol = solve_em_spectral(config.stack, config.omega, k_rho, config.z_source, loss=config.loss)
        for z in config.depths:
            assembled = assemble(sol, point, z, config.field)
            coefficients = (
                assembled.coefficients.values[:size] if assembled.coefficients is not None
                else np.full(size, np.nan)
            )
            rows.append(split_complex(coefficients) + split_complex(assembled.matrix)
                        + split_complex(b_profile(sol, z).value))
        return rows

    sol = solve_elastic_spectral(
        config.stack, config.omega, k_rho, config.z_source, source_kind=config.source_kind, loss=config.loss,
    )
    vector = config.source_kind == SourceKind.VECTOR
    for z in config.depths:
        assembled = assemble_G_elastic(sol, point, z)
        if assembled.coefficients is None:
            coefficients = np.full(size, np.nan)
        elif vector:
            coefficients = assembled.coefficients.as_array()
        else:
            coefficients = assembled.coefficients.values[:size]
        rows.append(split_complex(coefficients) + split_complex(assembled.vector if vector else assembled.matrix))
    return rows


def _spectral_rows_at(config, width, k_rho):
    try:
        values = _spectral_values(config, k_rho)
        status = RowStatus.OK
    except (SingularSystem, BranchPoint) as exc:
        logger.warning("k_rho=%.17g flagged: %s", k_rho, exc)
        values = [[np.nan] * width for _ in config.depths]
        status = RowStatus.SINGULAR
    return [[k_rho, z, *row, str(status)] for z, row in zip(config.depths, values)]


def spectral_table(config, *, threads=1):
    """每个 (k_rho, z) 一行; 碰到极点或支点的 k_rho 整组标记为 singular"""
    header = spectral_header(config)
    width = len(header) - 3
    chunks = run_ordered(partial(_spectral_rows_at, config, width), config.k_rho, threads)
    return header, [row for chunk in chunks for row in chunk]


def _spatial_kind(config):
    return GreenKind(config.field) if config.problem == Problem.MAXWELL else GreenKind.ELASTIC


def _spatial_row(config, spec, width, target):
    try:
        value = spatial_green(
            config.stack, config.omega, config.source, target, _spatial_kind(config), spec,
            source_kind=config.source_kind,
        )
        values, status = split_complex(value), RowStatus.OK
    except NonConvergent as exc:
        logger.warning("target %s flagged: %s", target, exc)
        values, status = [np.nan] * width, RowStatus.NONCONVERGENT
    except SingularSystem as exc:
        logger.warning("target %s flagged: %s", target, exc)
        values, status = [np.nan] * width, RowStatus.SINGULAR
    return [*target, *values, str(status)]


def spatial_table(config, *, threads=1):
    names = _field_names(config)
    header = ['x', 'y', 'z'] + complex_columns(names) + ['status']
    spec = config.quadrature or QuadratureSpec.from_settings()
    rows = run_ordered(partial(_spatial_row, config, spec, 2 * len(names)), config.points, threads)
    return header, rows


def _check_depths(config):
    """可以做场比较的深度: 不与源重合, 弹性问题中不在真空层"""
    depths = []
    for z in config.depths:
        if z == config.z_source:
            continue
        if config.problem != Problem.MAXWELL:
            if config.stack.materials[locate_layer(config.stack, z)].phase == Phase.VACUUM:
                continue
        depths.append(z)
    return depths


def _merge(values, name, value):
    values[name] = max(values.get(name, 0.0), float(value))


def _validate_em(config, alphas, depths, k_rho):
    values = {}
    sol = solve_em_spectral(config.stack, config.omega, k_rho, config.z_source, loss=config.loss)
    if config.perturb:
        sol = sol.perturbed(config.perturb)
    point = SpectralPoint.from_polar(k_rho, config.alpha)
    report = em_interface_residuals(sol, point)
    _merge(values, 'interface', max(report.by_check().values(), default=0.0))
    _merge(values, 'radiation', report.radiation)

    loss = sol.stack.loss
    for z in depths:
        _merge(values, 'b3 identity', b3_identity_residual(config.stack, config.omega, k_rho, config.z_source, z, loss=loss))
        _merge(values, 'rotation', rotation_residual(config.stack, config.omega, k_rho, config.z_source, z, alphas, loss=loss))

    if depths and k_rho > degenerate_threshold(max_wavenumber(config.stack, config.omega)):
        cross = em_cross_check(config.stack, config.omega, point, config.z_source, depths, loss=loss)
        if not cross.skipped:
            _merge(values, 'oracle', cross.error)
            _merge(values, 'filtering', cross.filtering)
    return values


def _validate_elastic(config, depths, k_rho):
    values = {}
    sol = solve_elastic_spectral(
        config.stack, config.omega, k_rho, config.z_source, source_kind=config.source_kind, loss=config.loss,
    )
    if config.perturb:
        sol = sol.perturbed(config.perturb)
    report = elastic_interface_residuals(sol)
    _merge(values, 'interface', max(report.by_check().values(), default=0.0))
    _merge(values, 'radiation', report.radiation)
    if config.source_kind == SourceKind.VECTOR:
        _merge(values, 'acoustic identity', acoustic_identity_residuals(sol).worst)

    loss = sol.stack.loss
    if depths and sol.k_rho > 0:
        point = SpectralPoint.from_polar(k_rho, config.alpha)
        cross = elastic_cross_check(
            config.stack, config.omega, point, config.z_source, depths, config.source_kind, loss=loss,
        )
        if not cross.skipped:
            _merge(values, 'oracle', cross.error)
            _merge(values, 'filtering', cross.filtering)
    return values


def _validate_at(config, alphas, depths, k_rho):
    try:
        if config.problem == Problem.MAXWELL:
            return _validate_em(config, alphas, depths, k_rho), False
        return _validate_elastic(config, depths, k_rho), False
    except (SingularSystem, BranchPoint) as exc:
        logger.warning("validation at k_rho=%.17g skipped: %s", k_rho, exc)
        return {}, True


def validation_thresholds():
    conf = green_settings.VALIDATION
    return {
        'interface': conf['INTERFACE'],
        'radiation': conf['RADIATION'],
        'acoustic identity': conf['INTERFACE'],
        'b3 identity': conf['B3_IDENTITY'],
        'rotation': conf['ROTATION'],
        'oracle': conf['ORACLE'],
        'filtering': conf['INTERFACE'],
    }


def run_validation(config, *, seed=0, threads=1):
    """
    对每个 k_rho 跑残差/辐射/b3/旋转/参考解比较, 每项取最大值。
    奇异的 k_rho 记入 skipped, 不算失败。
    """
    rng = np.random.default_rng(seed)
    alphas = (config.alpha, *rng.uniform(0, 2 * np.pi, 2))
    depths = _check_depths(config)
    results = run_ordered(partial(_validate_at, config, alphas, depths), config.k_rho, threads)

    merged = {}
    skipped = []
    for k_rho, (values, was_skipped) in zip(config.k_rho, results):
        if was_skipped:
            skipped.append(k_rho)
        for name, value in values.items():
            _merge(merged, name, value)

    thresholds = validation_thresholds()
    checks = tuple(CheckResult(name, merged[name], thresholds[name]) for name in thresholds if name in merged)
    return CheckReport(checks=checks, skipped=tuple(skipped))


def run_selfcheck(*, seed=0, count=None):
    """乘法表 (81 个乘积), 环封闭性 (全基与限制基 J1..J5), 分解往返"""
    count = count or green_settings.SELFCHECK_POINTS
    kx, ky = selfcheck_points(count, seed)
    table = product_residuals(kx, ky)

    rng = np.random.default_rng(seed)
    closure, restricted, round_trip = 0.0, 0.0, 0.0
    for x, y in zip(kx[:20], ky[:20]):
        point = SpectralPoint(float(x), float(y))
        a = BasisCoefficients(rng.normal(size=9) + 1j * rng.normal(size=9))
        b = BasisCoefficients(rng.normal(size=9) + 1j * rng.normal(size=9))
        closure = max(closure, _closure_error(a, b, point))

        # J1..J5 上的两个元素按完整乘法表相乘, J6..J9 的系数必须为零
        ra = BasisCoefficients(a.values[:5])
        rb = BasisCoefficients(b.values[:5])
        product = multiply_in_basis(ra, rb, point.k_rho_sq)
        leak = float(np.abs(product.values[5:]).max() / np.abs(product.values).max())
        restricted = max(restricted, leak, _closure_error(ra, rb, point))

        recovered = decompose(realize(a, point), point)
        round_trip = max(round_trip, float(np.abs(recovered.values - a.values).max() / np.abs(a.values).max()))

    checks = (
        CheckResult('product table', float(table.max()), 1e-13),
        CheckResult('ring closure', closure, 1e-12),
        CheckResult('restricted closure', restricted, 1e-12),
        CheckResult('decompose round trip', round_trip, 1e-10),
    )
    return CheckReport(checks=checks, table=table)


def _closure_error(a, b, point):
    product = realize(a, point) @ realize(b, point)
    predicted = realize(multiply_in_basis(a, b, point.k_rho_sq), point)
    return float(np.abs(product - predicted).max() / np.abs(product).max())
