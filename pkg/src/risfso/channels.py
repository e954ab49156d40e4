"""Channel parameter types and their derived constants.

RF hops are Rician; the RIS cascade amplitude sum_i alpha_i beta_i is fitted
by a Gamma law. FSO sub-links are Malaga turbulence with pointing error.
"""
import math
from dataclasses import dataclass
from functools import cached_property

from risfso.errors import DegenerateError, DomainError
from risfso.specfun import laguerre_half

# default atmosphere shared by all FSO sub-links
DEFAULT_OMEGA = 0.5
DEFAULT_B0 = 0.25
DEFAULT_RHO = 0.596
DEFAULT_PHI_A = 0.0
DEFAULT_PHI_B = math.pi / 2

TURBULENCE_PRESETS = {
    "strong": (2.296, 2),
    "moderate": (4.2, 3),
    "weak": (8.0, 4),
}


@dataclass(frozen=True)
class RicianHopParams:
    """Rician hop with shape factor K and mean-square amplitude omega."""

    K: float
    omega: float

    def __post_init__(self):
        if not (self.K >= 0 and math.isfinite(self.K)):
            raise DomainError(f"Rician K must be >= 0, got {self.K}")
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise DomainError(f"Rician omega must be > 0, got {self.omega}")


@dataclass(frozen=True)
class RfCascadeFit:
    """Gamma(a + 1, b) fit of the N-element cascade amplitude sum."""

    a: float
    b: float
    mean_amp: float
    var_sum: float
    n_elements: int

    @property
    def shape(self):
        return self.a + 1.0


def rician_amp_mean(hop):
    """E[|h|] = 1/2 sqrt(pi omega / (K + 1)) L_{1/2}(-K)."""
    return 0.5 * math.sqrt(math.pi * hop.omega / (hop.K + 1.0)) * laguerre_half(-hop.K)


def fit_rf_cascade(hop1, hop2, n_elements):
    """Moment-matched Gamma fit of sum_{i<=N} alpha_i beta_i.

    Matches the mean N E[xi] and variance N (omega1 omega2 - E[xi]^2) of
    the sum, where E[xi] = E[alpha] E[beta] per element.
    """
    N = int(n_elements)
    if N < 1 or N != n_elements:
        raise DomainError(f"element count must be a positive integer, got {n_elements}")
    mean_amp = rician_amp_mean(hop1) * rician_amp_mean(hop2)
    var_sum = N * (hop1.omega * hop2.omega - mean_amp**2)
    if not var_sum > 0:
        raise DegenerateError("cascade variance is not positive")
    mean_sum = N * mean_amp
    a = mean_sum**2 / var_sum - 1.0
    b = var_sum / mean_sum
    return RfCascadeFit(a=a, b=b, mean_amp=mean_amp, var_sum=var_sum, n_elements=N)


@dataclass(frozen=True)
class MalagaConstants:
    c: float
    omega_prime: float
    A: float
    a_m: tuple
    b_m: tuple
    B: float


@dataclass(frozen=True)
class MalagaPointingLink:
    """One FSO sub-link: Malaga turbulence, pointing error and detection order r."""

    alpha: float
    beta: int
    xi: float
    omega: float = DEFAULT_OMEGA
    b0: float = DEFAULT_B0
    rho: float = DEFAULT_RHO
    phi_a: float = DEFAULT_PHI_A
    phi_b: float = DEFAULT_PHI_B
    r: int = 1

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if int(self.beta) != self.beta or self.beta < 1:
            raise DomainError(f"beta must be a positive integer, got {self.beta}")
        object.__setattr__(self, "beta", int(self.beta))
        if not (self.xi > 0 and math.isfinite(self.xi)):
            raise DomainError(f"xi must be > 0, got {self.xi}")
        if not self.omega >= 0 or not self.b0 > 0:
            raise DomainError("need omega >= 0 and b0 > 0")
        if not 0 <= self.rho:
            raise DomainError(f"rho must lie in [0, 1), got {self.rho}")
        if self.rho >= 1:
            raise DegenerateError("rho >= 1 leaves no scatter power (c = 0)")
        if self.r not in (1, 2):
            raise DomainError(f"detection order r must be 1 or 2, got {self.r}")

    @classmethod
    def from_omega_prime(cls, alpha, beta, xi, omega_prime, *, b0=DEFAULT_B0, rho=DEFAULT_RHO,
                         phi_a=DEFAULT_PHI_A, phi_b=DEFAULT_PHI_B, r=1):
        """Build a link whose coherent LOS power equals ``omega_prime``."""
        k = math.sqrt(2.0 * b0 * rho)
        cos_d = math.cos(phi_a - phi_b)
        disc = (k * cos_d) ** 2 - k * k + omega_prime
        u = -k * cos_d + math.sqrt(disc) if disc >= 0 else -1.0
        if u < 0:
            raise DomainError(f"omega_prime={omega_prime} is unreachable with b0={b0}, rho={rho}")
        return cls(alpha, beta, xi, u * u, b0, rho, phi_a, phi_b, r)

    @cached_property
    def constants(self):
        return malaga_constants(self)

    @property
    def mean_irradiance(self):
        """E[I] with unit pointing-loss amplitude."""
        k = self.constants
        return (k.omega_prime + k.c) * self.xi**2 / (self.xi**2 + 1.0)


def omega_prime(link):
    """Omega' = Omega + 2 b0 rho + 2 sqrt(2 b0 rho Omega) cos(phi_A - phi_B)."""
    return (
        link.omega
        + 2.0 * link.b0 * link.rho
        + 2.0 * math.sqrt(2.0 * link.b0 * link.rho * link.omega) * math.cos(link.phi_a - link.phi_b)
    )


def malaga_constants(link):
    """Constants of the Malaga-with-pointing-error mixture density."""
    c = 2.0 * link.b0 * (1.0 - link.rho)
    if not c > 0:
        raise DegenerateError("scatter power c = 2 b0 (1 - rho) must be positive")
    op = omega_prime(link)
    al, be = link.alpha, link.beta
    cb = c * be + op
    log_A = (
        math.log(2.0)
        + 0.5 * al * math.log(al)
        - (1.0 + 0.5 * al) * math.log(c)
        - math.lgamma(al)
        + (be + 0.5 * al) * math.log(c * be / cb)
    )
    a_m, b_m = [], []
    for m in range(1, be + 1):
        am = (
            math.comb(be - 1, m - 1)
            * cb ** (1.0 - 0.5 * m)
            / math.factorial(m - 1)
            * (op / c) ** (m - 1)
            * (al / be) ** (0.5 * m)
        )
        a_m.append(am)
        b_m.append(am * (al * be / cb) ** (-0.5 * (al + m)))
    B = link.xi**2 * al * be * (c + op) / ((link.xi**2 + 1.0) * cb)
    return MalagaConstants(c, op, math.exp(log_A), tuple(a_m), tuple(b_m), B)


# --- scenario bundle ------------------------------------------------------

SCENARIOS = ("I", "II", "III")


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def linear_to_db(x):
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class ScenarioConfig:
    """Eavesdropping scenario, average SNRs (linear), target rate and RIS size."""

    scenario: str
    gamma1: float
    gamma2: float
    gamma_e1: float
    gamma_e2: float
    rs: float = 0.0
    n_elements: int = 2
    hop_split: float = 0.5

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise DomainError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        for name in ("gamma1", "gamma2", "gamma_e1", "gamma_e2"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be a positive finite SNR, got {v}")
        if not (self.rs >= 0 and math.isfinite(self.rs)):
            raise DomainError(f"target rate must be >= 0, got {self.rs}")
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise DomainError(f"RIS element count must be a positive integer, got {self.n_elements}")
        object.__setattr__(self, "n_elements", int(self.n_elements))
        if not 0.0 <= self.hop_split <= 1.0:
            raise DomainError(f"hop_split must lie in [0, 1], got {self.hop_split}")

    @property
    def phi(self):
        return 2.0**self.rs

    def replace(self, **changes):
        fields = {k: getattr(self, k) for k in self.__dataclass_fields__}
        fields.update(changes)
        return ScenarioConfig(**fields)


@dataclass(frozen=True)
class Channels:
    """All hop parameters.

    hop1: source to RF RIS, hop2: RF RIS to relay, hop3: RF RIS to the RF
    eavesdropper. link_h: relay to FSO RIS, link_g: FSO RIS to destination,
    link_ge: FSO RIS to the FSO eavesdropper.
    """

    hop1: RicianHopParams
    hop2: RicianHopParams
    hop3: RicianHopParams
    link_h: MalagaPointingLink
    link_g: MalagaPointingLink
    link_ge: MalagaPointingLink

    def __post_init__(self):
        if not self.link_h.r == self.link_g.r == self.link_ge.r:
            raise DomainError("all FSO sub-links must share the detection order r")

    @property
    def r(self):
        return self.link_h.r

    def main_fit(self, n_elements):
        return fit_rf_cascade(self.hop1, self.hop2, n_elements)

    def eve_fit(self, n_elements):
        # the eavesdropper cascade reuses the main RIS size
        return fit_rf_cascade(self.hop1, self.hop3, n_elements)
