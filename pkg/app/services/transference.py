"""
Ponte entre a bola B^d e o intervalo (0, 1).

O núcleo no intervalo é a média esférica do núcleo da bola com raio casado.
Aqui ficam as integrais zonais em S^{d−1}, a identidade fechada da esfera
gaussiana, a representação de Schläfli de I_ν e as checagens exatas em d = 1
via núcleos de imagens em (−1, 1).
"""

import logging
import math
from typing import Callable, Optional

import numpy as np

from app.errors import DomainError, UnsupportedCaseError
from app.models import KernelQuery, TransferCheckResult
from app.numerics.quadrature import adaptive_gauss_legendre, jacobi_weighted_integral
from app.numerics.specfun import Order, gamma, log_reduced_bessel_i
from app.services.kernels import default_image_count, image_tail_bound, kernel_series, subordinated_integral
from app.services.spectrum import get_basis, phi_table, weighted_nodes

# Configuração de logging
logger = logging.getLogger(__name__)

Profile = Callable[[np.ndarray], np.ndarray]

ZONAL_RTOL = 1e-12
SCHLAFLI_RTOL = 1e-13


# ============== Integrais zonais ==============

def sphere_area(d: int) -> float:
    """σ(S^{d−1}) = 2π^{d/2} / Γ(d/2)."""
    if d < 1:
        raise DomainError("d deve ser ≥ 1", {"d": d})
    return 2.0 * math.pi ** (0.5 * d) / gamma(0.5 * d)


def zonal_integral(d: int, profile: Profile) -> float:
    """
    ∫_{S^{d−1}} profile(ξ₁) dσ(ξ).

    Para d = 1 a esfera é S⁰ = {−1, 1}. Para d ≥ 2 reduz a
    σ(S^{d−2}) ∫_0^π profile(cos θ) sin^{d−2}θ dθ.

    Args:
        d: Dimensão ≥ 1
        profile: Função vetorizada da coordenada zonal ξ₁ ∈ [−1, 1]

    Returns:
        Valor da integral
    """
    if d < 1:
        raise DomainError("d deve ser ≥ 1", {"d": d})
    if d == 1:
        ends = np.asarray(profile(np.array([-1.0, 1.0])), dtype=float)
        return float(ends[0] + ends[1])

    def integrand(theta: np.ndarray) -> np.ndarray:
        values = np.asarray(profile(np.cos(theta)), dtype=float)
        return values * np.sin(theta) ** (d - 2)

    result = adaptive_gauss_legendre(integrand, np.linspace(0.0, math.pi, 9), rtol=ZONAL_RTOL)
    return sphere_area(d - 1) * result.value


def gaussian_sphere_closed(d: int, x: float, y: float, t: float, c: float) -> float:
    """
    ∫_{S^{d−1}} e^{−|x e₁ − yξ|²/(ct)} dσ(ξ) em forma fechada.

    (2π)^{ν+1} e^{−(x²+y²)/(ct)} (ct/(2xy))^ν I_ν(2xy/(ct)), ν = d/2 − 1,
    avaliada com z^{−ν}I_ν(z) em escala logarítmica (finita em xy = 0).
    """
    if d < 1:
        raise DomainError("d deve ser ≥ 1", {"d": d})
    if x < 0 or y < 0 or t <= 0 or c <= 0:
        raise DomainError("Exige x, y ≥ 0 e t, c > 0", {"x": x, "y": y, "t": t, "c": c})
    nu = 0.5 * d - 1.0
    ct = c * t
    z = 2.0 * x * y / ct
    log_value = (
        (nu + 1.0) * math.log(2.0 * math.pi)
        - (x * x + y * y) / ct
        + float(log_reduced_bessel_i(nu, np.array([z]))[0])
    )
    return math.exp(log_value)


def schlafli_integral(order: Order, z: float) -> float:
    """
    I_ν(z) pela representação de Poisson:
    z^ν / (√π 2^ν Γ(ν+1/2)) ∫_{−1}^{1} e^{zs} (1−s²)^{ν−1/2} ds.

    O peso (1−s²)^{ν−1/2} vai para Gauss–Jacobi; o fator e^{z} sai da integral.
    """
    order = Order.of(order)
    nu = order.value
    if nu <= -0.5:
        raise DomainError("A representação exige ν > −1/2", {"nu": nu})
    if z < 0:
        raise DomainError("z deve ser ≥ 0", {"z": z})
    if z == 0:
        return 1.0 if nu == 0 else 0.0
    result = jacobi_weighted_integral(
        lambda s: np.exp(z * (s - 1.0)),
        nu - 0.5,
        nu - 0.5,
        rtol=SCHLAFLI_RTOL,
    )
    log_prefactor = z + nu * math.log(z) - 0.5 * math.log(math.pi) - nu * math.log(2.0) - math.log(gamma(nu + 0.5))
    return math.exp(log_prefactor) * result.value


# ============== d = 1 ==============

def _interval_image_count(t: float, image_count: Optional[int]) -> int:
    count = image_count if image_count is not None else default_image_count(t)
    if count < 1:
        raise DomainError("image_count deve ser ≥ 1", {"image_count": count})
    return count


def dirichlet_interval_kernel(t, x: float, y: float, image_count: Optional[int] = None) -> np.ndarray:
    """
    Núcleo de calor de Dirichlet em (−1, 1) pelas imagens de período 4:
    Σ_j g(x−y−4j) − g(x+y+2−4j), g o núcleo gaussiano livre.

    Vetorizado em t (usado dentro da subordinação). A cota das imagens
    omitidas está em dirichlet_interval_tail_bound.
    """
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(times <= 0):
        raise DomainError("t deve ser > 0", {"t": float(times.min())})
    if not (-1.0 <= x <= 1.0 and -1.0 <= y <= 1.0):
        raise DomainError("x, y devem estar em [−1, 1]", {"x": x, "y": y})
    count = _interval_image_count(float(times.max()), image_count)
    j = np.arange(-count, count + 1, dtype=float)[None, :]
    s = times[:, None]
    norm = 1.0 / np.sqrt(4.0 * math.pi * s)
    direct = np.exp(-np.square(x - y - 4.0 * j) / (4.0 * s))
    reflected = np.exp(-np.square(x + y + 2.0 - 4.0 * j) / (4.0 * s))
    values = (norm * (direct - reflected)).sum(axis=1)
    return values


def dirichlet_interval_tail_bound(t: float, image_count: Optional[int] = None) -> float:
    """Cota gaussiana das imagens com |j| > J em dirichlet_interval_kernel (duas famílias, período 4)."""
    if t <= 0:
        raise DomainError("t deve ser > 0", {"t": t})
    return image_tail_bound(t, _interval_image_count(t, image_count), 4.0, 2)


def _folded_kernel(x: float, y: float) -> Callable[[np.ndarray], np.ndarray]:
    """s ↦ 𝒢_s(x, y) + 𝒢_s(x, −y): soma sobre S⁰ = {−1, 1}."""
    def heat(s: np.ndarray) -> np.ndarray:
        return dirichlet_interval_kernel(s, x, y) + dirichlet_interval_kernel(s, x, -y)
    return heat


def interval_transference_check(alpha: float, t: float, x: float, y: float, d: int = 1) -> TransferCheckResult:
    """
    Compara G_t^{−1/2,α}(x, y) com 𝒢_t^{(1),α}(x, y) + 𝒢_t^{(1),α}(x, −y).

    α = 2 usa o núcleo de imagens diretamente; α = 1 o subordina.

    Raises:
        UnsupportedCaseError: d ≠ 1 ou α ∉ {1, 2}
    """
    if d != 1:
        raise UnsupportedCaseError(
            "A transferência exata só é verificável em d = 1",
            {"d": d},
        )
    if alpha not in (1.0, 2.0):
        raise UnsupportedCaseError(
            f"Sem núcleo independente da bola para α={alpha:g}",
            {"alpha": alpha},
        )
    lhs = kernel_series(KernelQuery(nu=-0.5, alpha=alpha, t=t, x=x, y=y)).value
    heat = _folded_kernel(x, y)
    tail = None
    if alpha == 2.0:
        rhs = float(heat(np.array([t]))[0])
        # duas avaliações: y e −y
        tail = 2.0 * dirichlet_interval_tail_bound(t)
    else:
        rhs = subordinated_integral(heat, t, 0.5 * math.pi).value
    rel_err = abs(lhs - rhs) / abs(lhs) if lhs != 0 else abs(rhs)
    logger.debug(f"Transferência d=1, α={alpha:g}, t={t:g}: erro relativo {rel_err:.2e}")
    return TransferCheckResult(lhs=lhs, rhs=rhs, rel_err=rel_err, tail_estimate=tail)


# ============== Coeficientes radiais ==============

def ball_radial_coefficient(d: int, f: Callable[[np.ndarray], np.ndarray], n: int) -> float:
    """
    ⟨F, Φ_{n,0,1}⟩ em B^d para F(𝚡) = f(|𝚡|), em coordenadas polares.

    Φ_{n,0,1}(𝚡) = φ_n^ν(|𝚡|) σ(S^{d−1})^{−1/2} com ν = d/2 − 1; o resultado
    é c_d ⟨f, φ_n^ν⟩ com c_d = σ(S^{d−1})^{1/2}.
    """
    if d < 1:
        raise DomainError("d deve ser ≥ 1", {"d": d})
    order = Order(value=0.5 * d - 1.0)
    basis = get_basis(order, n)
    basis.check_index(n)
    sphere = zonal_integral(d, np.ones_like)
    r, weights = weighted_nodes(order, 4 * n + 16)
    phi = phi_table(basis, n, r, start=n - 1)[0]
    radial = math.fsum(weights * np.asarray(f(r), dtype=float) * phi)
    return sphere / math.sqrt(sphere) * radial
