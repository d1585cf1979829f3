"""Spectra and essential spectra of multiplication operators M_u."""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Literal, Optional, Tuple

import numpy as np
from scipy import ndimage

from .config import settings
from .errors import HypothesisError, OnCurveError, SpecError
from .numerics import curve_distance, winding_number
from .spaces import SpaceSpec, classify_regime, radius_levels
from .symbols import Symbol, ball_fill, boundary_curve, boundary_max_modulus

logger = logging.getLogger(__name__)

Kind = Literal["spectrum", "essential"]
MembershipMode = Literal["winding", "curve_distance", "grid_occupancy"]
Membership = Literal["inside", "boundary", "outside"]

_EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class OccupancyGrid:
    """Square cells over the complex plane; mask[i, j] covers origin + (i + 1j*j)*cell."""

    origin: complex
    cell: float
    mask: np.ndarray

    @classmethod
    def covering(cls, points: np.ndarray, cells: Optional[int] = None) -> "OccupancyGrid":
        cells = settings.occupancy_cells if cells is None else cells
        points = np.asarray(points, dtype=complex).ravel()
        lo = complex(points.real.min(), points.imag.min())
        hi = complex(points.real.max(), points.imag.max())
        extent = max(hi.real - lo.real, hi.imag - lo.imag)
        extent = max(extent, 1e-9 * max(1.0, abs(lo), abs(hi)))
        # two spare cells on each side
        cell = extent / (cells - 4)
        centre = (lo + hi) / 2.0
        origin = centre - complex(cells, cells) * cell / 2.0
        return cls(origin=origin, cell=cell, mask=np.zeros((cells, cells), dtype=bool))

    def indices(self, points) -> Tuple[np.ndarray, np.ndarray]:
        offset = (np.asarray(points, dtype=complex) - self.origin) / self.cell
        return np.floor(offset.real).astype(int), np.floor(offset.imag).astype(int)

    def marked(self, points) -> "OccupancyGrid":
        mask = self.mask.copy()
        i, j = self.indices(points)
        keep = (i >= 0) & (j >= 0) & (i < mask.shape[0]) & (j < mask.shape[1])
        mask[i[keep], j[keep]] = True
        return OccupancyGrid(self.origin, self.cell, mask)

    def with_mask(self, mask: np.ndarray) -> "OccupancyGrid":
        return OccupancyGrid(self.origin, self.cell, mask)

    def centres(self) -> np.ndarray:
        i, j = np.nonzero(self.mask)
        return self.origin + (i + 0.5) * self.cell + 1j * (j + 0.5) * self.cell

    def classify(self, lam: complex) -> Membership:
        i, j = self.indices(np.array([lam]))
        i, j = int(i[0]), int(j[0])
        size = self.mask.shape[0]
        if not (0 <= i < size and 0 <= j < size):
            return "outside"
        block = self.mask[max(i - 1, 0) : i + 2, max(j - 1, 0) : j + 2]
        if block.size == 9 and block.all():
            return "inside"
        return "boundary" if block.any() else "outside"


@dataclass(frozen=True)
class SpectrumEstimate:
    kind: Kind
    boundary_curves: Tuple[np.ndarray, ...]
    sample_cloud: np.ndarray
    membership_mode: MembershipMode
    spectral_radius: float
    radius_witness: complex
    preimage: Tuple[complex, ...]
    band: float
    resolution: Dict[str, float] = field(default_factory=dict)
    grid: Optional[OccupancyGrid] = None
    theorem: str = ""

    @property
    def arc_length(self) -> float:
        total = 0.0
        for curve in self.boundary_curves:
            closed = np.append(curve, curve[:1])
            total += float(np.sum(np.abs(np.diff(closed))))
        return total

    @property
    def compact_possible(self) -> bool:
        """M_u can only be compact when the represented set is {0}."""
        if self.grid is not None and self.membership_mode == "grid_occupancy":
            return self.spectral_radius <= self.band
        return self.spectral_radius <= self.band and self.arc_length <= self.band


def _curve_band(u: Symbol, count: int) -> float:
    z = np.exp(2j * np.pi * np.arange(count) / count)
    values, derivs = u.values_and_derivative(z)
    band = 2.0 * math.pi * float(np.max(np.abs(derivs))) / count
    return max(band, settings.rel_tol * max(1.0, float(np.max(np.abs(values)))))


def _curve_estimate(u: Symbol, kind: Kind, mode: MembershipMode, theorem: str) -> SpectrumEstimate:
    count = settings.curve_samples
    t, curve = boundary_curve(u, count)
    k = int(np.argmax(np.abs(curve)))
    band = _curve_band(u, count)
    return SpectrumEstimate(
        kind=kind,
        boundary_curves=(curve,),
        sample_cloud=np.zeros(0, dtype=complex),
        membership_mode=mode,
        spectral_radius=float(abs(curve[k])),
        radius_witness=complex(curve[k]),
        preimage=(complex(np.exp(1j * t[k])),),
        band=band,
        resolution={"curve_samples": float(count), "band": band},
        theorem=theorem,
    )


def _cloud_estimate(u: Symbol, kind: Kind, theorem: str) -> SpectrumEstimate:
    points = ball_fill(u.dimension)
    cloud = u.ball_values(points)
    grid = OccupancyGrid.covering(cloud).marked(cloud)
    k = int(np.argmax(np.abs(cloud)))
    logger.debug("ball cloud of %d values on %d cells", cloud.size, grid.mask.shape[0])
    return SpectrumEstimate(
        kind=kind,
        boundary_curves=(),
        sample_cloud=cloud,
        membership_mode="grid_occupancy",
        spectral_radius=float(abs(cloud[k])),
        radius_witness=complex(cloud[k]),
        preimage=tuple(complex(c) for c in points[:, k]),
        band=grid.cell,
        resolution={
            "ball_samples": float(cloud.size),
            "cells": float(grid.mask.shape[0]),
            "cell": grid.cell,
        },
        grid=grid,
        theorem=theorem,
    )


def spectrum(u: Symbol) -> SpectrumEstimate:
    """σ(M_u) = closure of u(𝔹ₙ)."""
    if u.dimension == 1:
        return _curve_estimate(u, "spectrum", "winding", "spectrum = closure of u(D)")
    return _cloud_estimate(u, "spectrum", "spectrum = closure of u(B_n)")


def essential_hypotheses(space: SpaceSpec) -> str:
    """Name of the theorem giving σ_e(M_u) = u(∂𝔻) for the space, if any."""
    regime = classify_regime(space)
    if regime == "bounded":
        return "M(X) = H^inf: essential spectrum = u(boundary) for u in A(D)"
    if regime == "bloch_small":
        return "Bloch 0 < alpha < 1: essential spectrum = u(boundary)"
    if regime == "bloch_log":
        return "Bloch alpha = 1, u in M(B) continuous up to the boundary: essential spectrum = u(boundary)"
    if regime == "algebra":
        if space.variant == "hardy_sobolev":
            return "Hardy-Sobolev beta > 1/2: essential spectrum = u(boundary)"
        if space.p > 1:
            return "Bergman-Sobolev p > 1, beta > (2+alpha)/p: essential spectrum = u(boundary)"
    raise HypothesisError(
        f"outside theorem hypotheses: no essential-spectrum theorem covers {space.label}",
        theorem="essential spectrum = u(boundary) (Bloch 0<alpha<=1, Sobolev algebras, M(X)=H^inf)",
    )


def _annulus_estimate(u: Symbol, theorem: str) -> SpectrumEstimate:
    count = settings.curve_samples
    circle = np.exp(2j * np.pi * np.arange(count) / count)
    radii = np.append(radius_levels(), 1.0)
    values = u.values(radii[:, None] * circle[None, :])
    grid = OccupancyGrid.covering(values[-1])

    masks = []
    depth = settings.boundary_refine_depth
    for j in range(1, depth + 1):
        outer = values[radii >= 1.0 - 2.0**-j]
        hit = grid.marked(outer).mask
        masks.append(ndimage.binary_dilation(hit, structure=_EIGHT_CONNECTED))
    final = grid.with_mask(np.logical_and.reduce(masks))

    last = values[radii >= 1.0 - 2.0**-depth].ravel()
    i, j = final.indices(last)
    size = final.mask.shape[0]
    keep = (i >= 0) & (j >= 0) & (i < size) & (j < size)
    keep[keep] = final.mask[i[keep], j[keep]]
    cloud = last[keep]
    k = int(np.argmax(np.abs(cloud)))
    logger.info("annulus intersection over %d levels keeps %d cells", depth, int(final.mask.sum()))
    return SpectrumEstimate(
        kind="essential",
        boundary_curves=(),
        sample_cloud=cloud,
        membership_mode="grid_occupancy",
        spectral_radius=float(abs(cloud[k])),
        radius_witness=complex(cloud[k]),
        preimage=(),
        band=final.cell,
        resolution={"curve_samples": float(count), "levels": float(depth), "cell": final.cell},
        grid=final,
        theorem=theorem,
    )


def essential_spectrum(u: Symbol, space: SpaceSpec, annulus: bool = False) -> SpectrumEstimate:
    """σ_e(M_u) under the theorem that covers (u, space)."""
    if u.dimension != space.n:
        raise SpecError(f"symbol in {u.dimension} variable(s) on a space over the ball of C^{space.n}")
    if u.dimension > 1:
        return _cloud_estimate(u, "essential", "n > 1 with coordinate multipliers: essential spectrum = spectrum")
    theorem = essential_hypotheses(space)
    if annulus:
        if classify_regime(space) != "bounded":
            raise HypothesisError(
                f"annulus mode needs M(X) = H^inf, {space.label} is not such a space",
                theorem="essential spectrum = intersection of closures of u(D minus rD) for M(X) = H^inf",
            )
        return _annulus_estimate(u, theorem)
    return _curve_estimate(u, "essential", "curve_distance", theorem)


def membership(est: SpectrumEstimate, lam: complex) -> Membership:
    lam = complex(lam)
    if est.membership_mode == "grid_occupancy":
        return est.grid.classify(lam)
    curve = est.boundary_curves[0]
    if curve_distance(curve, lam) <= est.band:
        return "boundary"
    if est.membership_mode == "curve_distance":
        return "outside"
    try:
        return "inside" if winding_number(curve, lam) >= 1 else "outside"
    except OnCurveError:
        return "boundary"


@dataclass(frozen=True)
class SpectralRadiusReport:
    sup_spectrum: float
    sup_essential: float
    sup_norm_u: float
    spectrum_witness: complex
    essential_witness: complex
    norm_witness: Tuple[complex, ...]

    @property
    def spread(self) -> float:
        values = (self.sup_spectrum, self.sup_essential, self.sup_norm_u)
        return max(values) - min(values)


def spectral_radius_report(u: Symbol, space: SpaceSpec) -> SpectralRadiusReport:
    """sup |σ(M_u)|, sup |σ_e(M_u)| and ‖u‖_∞, each with a witness."""
    ess = essential_spectrum(u, space)
    spec = spectrum(u)
    peak = boundary_max_modulus(u)
    report = SpectralRadiusReport(
        sup_spectrum=spec.spectral_radius,
        sup_essential=ess.spectral_radius,
        sup_norm_u=peak.value,
        spectrum_witness=spec.radius_witness,
        essential_witness=ess.radius_witness,
        norm_witness=peak.witness_point,
    )
    if report.spread > 10 * settings.rel_tol * max(1.0, peak.value):
        logger.warning("spectral suprema disagree by %.3e", report.spread)
    return report


def _raster(est: SpectrumEstimate) -> np.ndarray:
    if est.grid is not None:
        return est.grid.mask
    curve = est.boundary_curves[0]
    grid = OccupancyGrid.covering(curve)
    closed = np.append(curve, curve[:1])
    steps = np.abs(np.diff(closed))
    # subdivide so consecutive points fall in adjacent cells
    per_segment = max(1, int(math.ceil(float(steps.max(initial=0.0)) / (grid.cell / 2.0))))
    t = np.arange(per_segment) / per_segment
    dense = (closed[:-1, None] + t[None, :] * np.diff(closed)[:, None]).ravel()
    return grid.marked(dense).mask


def connectedness_check(est: SpectrumEstimate) -> bool:
    """One 8-connected component after a one-cell dilation."""
    mask = ndimage.binary_dilation(_raster(est), structure=_EIGHT_CONNECTED)
    _, components = ndimage.label(mask, structure=_EIGHT_CONNECTED)
    logger.debug("%s estimate has %d components", est.kind, components)
    return components == 1
