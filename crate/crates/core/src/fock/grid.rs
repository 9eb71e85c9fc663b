use std::collections::hash_map::DefaultHasher;
use std::f64::consts::PI;
use std::hash::{Hash, Hasher};

use crate::quad::gauss_legendre;
use crate::{dot3, norm3, Error, Result, Vec3};

/// One photon mode: a momentum node, an optional polarization label and the
/// momentum-space volume element it represents.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub index: usize,
    pub momentum: Vec3,
    pub polarization: Option<u8>,
    pub weight: f64,
}

impl Mode {
    pub fn energy(&self) -> f64 {
        norm3(&self.momentum)
    }

    pub fn direction(&self) -> Vec3 {
        let k = self.energy();
        [self.momentum[0] / k, self.momentum[1] / k, self.momentum[2] / k]
    }
}

/// Angular quadrature used for three-dimensional grids.
#[derive(Debug, Clone, PartialEq)]
pub enum DirectionSet {
    /// The two directions ±x of a one-dimensional grid (unit weights).
    Line,
    /// ±x, ±y, ±z with equal weights 4π/6.
    Axes6,
    /// 14-point Lebedev rule (axes and cube corners), exact to degree 5.
    Lebedev14,
    /// Gauss–Legendre in cos θ times a uniform azimuthal rule.
    GaussProduct { polar: usize, azimuthal: usize },
}

impl DirectionSet {
    /// Unit vectors with their solid-angle weights.
    pub fn points(&self) -> Vec<(Vec3, f64)> {
        match self {
            DirectionSet::Line => vec![([1.0, 0.0, 0.0], 1.0), ([-1.0, 0.0, 0.0], 1.0)],
            DirectionSet::Axes6 => {
                let w = 4.0 * PI / 6.0;
                vec![
                    ([1.0, 0.0, 0.0], w),
                    ([-1.0, 0.0, 0.0], w),
                    ([0.0, 1.0, 0.0], w),
                    ([0.0, -1.0, 0.0], w),
                    ([0.0, 0.0, 1.0], w),
                    ([0.0, 0.0, -1.0], w),
                ]
            }
            DirectionSet::Lebedev14 => {
                let mut out: Vec<(Vec3, f64)> = DirectionSet::Axes6
                    .points()
                    .into_iter()
                    .map(|(d, _)| (d, 4.0 * PI / 15.0))
                    .collect();
                let c = 1.0 / 3f64.sqrt();
                for sx in [1.0, -1.0] {
                    for sy in [1.0, -1.0] {
                        for sz in [1.0, -1.0] {
                            out.push(([sx * c, sy * c, sz * c], 4.0 * PI * 3.0 / 40.0));
                        }
                    }
                }
                out
            }
            DirectionSet::GaussProduct { polar, azimuthal } => {
                let (xs, ws) = gauss_legendre(*polar);
                let dphi = 2.0 * PI / *azimuthal as f64;
                let mut out = Vec::with_capacity(polar * azimuthal);
                for (x, w) in xs.iter().zip(&ws) {
                    let s = (1.0 - x * x).max(0.0).sqrt();
                    for j in 0..*azimuthal {
                        let phi = (j as f64 + 0.5) * dphi;
                        out.push(([s * phi.cos(), s * phi.sin(), *x], w * dphi));
                    }
                }
                out
            }
        }
    }

    fn validate(&self, dimension: usize) -> Result<()> {
        match (self, dimension) {
            (DirectionSet::Line, 1) => Ok(()),
            (DirectionSet::Line, _) => Err(Error::arg("direction set `line` requires dimension 1")),
            (_, 1) => Err(Error::arg("dimension 1 requires direction set `line`")),
            (DirectionSet::GaussProduct { polar, azimuthal }, _) if *polar == 0 || *azimuthal == 0 => {
                Err(Error::arg("gauss direction set needs polar, azimuthal >= 1"))
            }
            _ => Ok(()),
        }
    }
}

/// Explicit transversal frame completing `khat`: the first vector is the
/// projection of the coordinate axis least aligned with `khat` (lowest axis
/// index on ties), the second is `khat × e1`.
pub fn transverse_frame(khat: &Vec3) -> [Vec3; 2] {
    let mut axis = 0;
    for a in 1..3 {
        if khat[a].abs() < khat[axis].abs() - 1e-12 {
            axis = a;
        }
    }
    let mut e = [0.0; 3];
    e[axis] = 1.0;
    let proj = dot3(&e, khat);
    let mut e1 = [e[0] - proj * khat[0], e[1] - proj * khat[1], e[2] - proj * khat[2]];
    let n = norm3(&e1);
    for c in &mut e1 {
        *c /= n;
    }
    let e2 = [
        khat[1] * e1[2] - khat[2] * e1[1],
        khat[2] * e1[0] - khat[0] * e1[2],
        khat[0] * e1[1] - khat[1] * e1[0],
    ];
    [e1, e2]
}

/// Parameters of a logarithmic radial grid between the infrared cutoff λ and
/// the ultraviolet cutoff Λ.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub dimension: usize,
    pub ir_cutoff: f64,
    pub uv_cutoff: f64,
    pub points_per_decade: usize,
    pub directions: DirectionSet,
    pub polarized: bool,
}

impl GridSpec {
    pub fn with_ir_cutoff(&self, ir_cutoff: f64) -> Self {
        Self {
            ir_cutoff,
            ..self.clone()
        }
    }
}

/// Radial cell edges anchored at `uv`: `uv · 10^{-j/ppd}`, clipped at `ir`.
pub fn radial_cells(ir: f64, uv: f64, points_per_decade: usize) -> Vec<(f64, f64)> {
    let mut cells = Vec::new();
    let mut j = 0usize;
    loop {
        let hi = uv * 10f64.powf(-(j as f64) / points_per_decade as f64);
        let mut lo = uv * 10f64.powf(-((j + 1) as f64) / points_per_decade as f64);
        // edges closer than this to λ are treated as equal so decade-aligned
        // cutoffs do not produce sliver cells
        if lo <= ir * (1.0 + 1e-9) {
            lo = ir;
        }
        if hi <= lo * (1.0 + 1e-12) {
            break;
        }
        cells.push((lo, hi));
        if lo == ir {
            break;
        }
        j += 1;
    }
    cells
}

/// Node of a radial cell chosen so that the cell's exact volume
/// `∫ r^{d-1} dr` used as weight also integrates `r^{-d}` exactly.
pub fn radial_node(lo: f64, hi: f64, dimension: usize) -> (f64, f64) {
    let d = dimension as i32;
    let volume = (hi.powi(d) - lo.powi(d)) / d as f64;
    let log_len = (hi / lo).ln();
    let node = (volume / log_len).powf(1.0 / d as f64);
    (node, volume)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    dimension: usize,
    modes: Vec<Mode>,
    ir_cutoff: f64,
    uv_cutoff: f64,
    fingerprint: u64,
}

impl ModeGrid {
    /// Logarithmic radial grid times an angular rule; with `polarized` every
    /// momentum node carries two transversal polarization modes.
    pub fn log_radial(spec: &GridSpec) -> Result<Self> {
        if spec.dimension != 1 && spec.dimension != 3 {
            return Err(Error::arg(format!("dimension must be 1 or 3, got {}", spec.dimension)));
        }
        if !(spec.ir_cutoff > 0.0 && spec.ir_cutoff < spec.uv_cutoff && spec.uv_cutoff.is_finite()) {
            return Err(Error::arg(format!(
                "cutoffs must satisfy 0 < λ < Λ < ∞ (λ = {}, Λ = {})",
                spec.ir_cutoff, spec.uv_cutoff
            )));
        }
        if spec.points_per_decade == 0 {
            return Err(Error::arg("points_per_decade must be >= 1"));
        }
        if spec.polarized && spec.dimension != 3 {
            return Err(Error::arg("polarized grids require dimension 3"));
        }
        spec.directions.validate(spec.dimension)?;
        let dirs = spec.directions.points();
        let mut modes = Vec::new();
        for (lo, hi) in radial_cells(spec.ir_cutoff, spec.uv_cutoff, spec.points_per_decade) {
            let (r, volume) = radial_node(lo, hi, spec.dimension);
            for (dir, dw) in &dirs {
                let momentum = [r * dir[0], r * dir[1], r * dir[2]];
                let weight = volume * dw;
                if spec.polarized {
                    for pol in [1u8, 2u8] {
                        modes.push(Mode {
                            index: modes.len(),
                            momentum,
                            polarization: Some(pol),
                            weight,
                        });
                    }
                } else {
                    modes.push(Mode {
                        index: modes.len(),
                        momentum,
                        polarization: None,
                        weight,
                    });
                }
            }
        }
        Self::from_modes(spec.dimension, modes, spec.ir_cutoff, spec.uv_cutoff)
    }

    /// Grid from explicit modes. Indices are reassigned to the sequence order.
    pub fn from_modes(dimension: usize, mut modes: Vec<Mode>, ir_cutoff: f64, uv_cutoff: f64) -> Result<Self> {
        if dimension != 1 && dimension != 3 {
            return Err(Error::arg(format!("dimension must be 1 or 3, got {dimension}")));
        }
        if modes.is_empty() {
            return Err(Error::arg("mode grid is empty"));
        }
        if !(ir_cutoff > 0.0 && ir_cutoff <= uv_cutoff) {
            return Err(Error::arg("cutoffs must satisfy 0 < λ <= Λ"));
        }
        for (i, m) in modes.iter_mut().enumerate() {
            m.index = i;
            let k = m.energy();
            if !(k > 0.0) {
                return Err(Error::arg(format!("mode {i} has zero momentum")));
            }
            if dimension == 1 && (m.momentum[1] != 0.0 || m.momentum[2] != 0.0) {
                return Err(Error::arg(format!("mode {i}: one-dimensional momenta live on the x axis")));
            }
            if k < ir_cutoff * (1.0 - 1e-12) || k > uv_cutoff * (1.0 + 1e-12) {
                return Err(Error::arg(format!("mode {i}: |k| = {k} outside [{ir_cutoff}, {uv_cutoff}]")));
            }
            if !(m.weight > 0.0 && m.weight.is_finite()) {
                return Err(Error::arg(format!("mode {i} has non-positive weight")));
            }
            if let Some(p) = m.polarization {
                if p != 1 && p != 2 {
                    return Err(Error::arg(format!("mode {i}: polarization must be 1 or 2")));
                }
            }
        }
        for i in 0..modes.len() {
            for j in 0..i {
                if modes[i].momentum == modes[j].momentum && modes[i].polarization == modes[j].polarization {
                    return Err(Error::arg(format!("modes {j} and {i} coincide")));
                }
            }
        }
        let mut h = DefaultHasher::new();
        dimension.hash(&mut h);
        ir_cutoff.to_bits().hash(&mut h);
        uv_cutoff.to_bits().hash(&mut h);
        for m in &modes {
            for c in m.momentum {
                c.to_bits().hash(&mut h);
            }
            m.polarization.hash(&mut h);
            m.weight.to_bits().hash(&mut h);
        }
        Ok(Self {
            dimension,
            modes,
            ir_cutoff,
            uv_cutoff,
            fingerprint: h.finish(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn ir_cutoff(&self) -> f64 {
        self.ir_cutoff
    }

    pub fn uv_cutoff(&self) -> f64 {
        self.uv_cutoff
    }

    /// Content hash identifying the grid; equal grids share a fingerprint.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Sum of volume elements; polarization partners share one element.
    pub fn total_weight(&self) -> f64 {
        self.modes
            .iter()
            .filter(|m| m.polarization != Some(2))
            .map(|m| m.weight)
            .sum()
    }

    /// Unit polarization vector of a polarized mode.
    pub fn polarization_vector(&self, index: usize) -> Option<Vec3> {
        let m = &self.modes[index];
        let pol = m.polarization?;
        let frame = transverse_frame(&m.direction());
        Some(frame[(pol - 1) as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec3(ir: f64, ppd: usize, dirs: DirectionSet) -> GridSpec {
        GridSpec {
            dimension: 3,
            ir_cutoff: ir,
            uv_cutoff: 1.0,
            points_per_decade: ppd,
            directions: dirs,
            polarized: false,
        }
    }

    #[test]
    fn weights_reproduce_shell_volume() {
        let g = ModeGrid::log_radial(&spec3(1e-2, 3, DirectionSet::Axes6)).unwrap();
        let exact = 4.0 * PI / 3.0 * (1.0 - 1e-6);
        assert!((g.total_weight() - exact).abs() < 1e-12 * exact);
        for m in g.modes() {
            assert!(m.energy() >= 1e-2 && m.energy() <= 1.0);
        }
    }

    #[test]
    fn inverse_cube_integral_is_exact() {
        let g = ModeGrid::log_radial(&spec3(1e-3, 2, DirectionSet::Lebedev14)).unwrap();
        let s: f64 = g.modes().iter().map(|m| m.weight / m.energy().powi(3)).sum();
        let exact = 4.0 * PI * (1e3f64).ln();
        assert!((s - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn grids_share_modes_across_decade_cutoffs() {
        let a = ModeGrid::log_radial(&spec3(1e-1, 2, DirectionSet::Axes6)).unwrap();
        let b = ModeGrid::log_radial(&spec3(1e-2, 2, DirectionSet::Axes6)).unwrap();
        assert_eq!(a.len(), 12);
        assert_eq!(b.len(), 24);
        for (ma, mb) in a.modes().iter().zip(b.modes()) {
            assert_eq!(ma.momentum, mb.momentum);
            assert_eq!(ma.weight, mb.weight);
        }
    }

    #[test]
    fn direction_rules_integrate_low_degree_harmonics() {
        for set in [
            DirectionSet::Axes6,
            DirectionSet::Lebedev14,
            DirectionSet::GaussProduct { polar: 6, azimuthal: 8 },
        ] {
            let pts = set.points();
            let total: f64 = pts.iter().map(|p| p.1).sum();
            assert!((total - 4.0 * PI).abs() < 1e-12);
            let z2: f64 = pts.iter().map(|(d, w)| w * d[2] * d[2]).sum();
            assert!((z2 - 4.0 * PI / 3.0).abs() < 1e-12, "{set:?}");
        }
    }

    #[test]
    fn transverse_frame_is_orthonormal() {
        for k in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.6, 0.0, 0.8], [1.0 / 3f64.sqrt(); 3]] {
            let [e1, e2] = transverse_frame(&k);
            assert!(dot3(&e1, &k).abs() < 1e-14);
            assert!(dot3(&e2, &k).abs() < 1e-14);
            assert!(dot3(&e1, &e2).abs() < 1e-14);
            assert!((norm3(&e1) - 1.0).abs() < 1e-14);
            assert!((norm3(&e2) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(ModeGrid::log_radial(&spec3(2.0, 2, DirectionSet::Axes6)).is_err());
        assert!(ModeGrid::log_radial(&spec3(0.1, 2, DirectionSet::Line)).is_err());
        let m = Mode {
            index: 0,
            momentum: [0.5, 0.0, 0.0],
            polarization: None,
            weight: 1.0,
        };
        assert!(ModeGrid::from_modes(1, vec![m.clone(), m.clone()], 0.1, 1.0).is_err());
        assert!(ModeGrid::from_modes(1, vec![], 0.1, 1.0).is_err());
        let mut far = m.clone();
        far.momentum = [2.0, 0.0, 0.0];
        assert!(ModeGrid::from_modes(1, vec![far], 0.1, 1.0).is_err());
    }

    #[test]
    fn polarized_grid_doubles_modes() {
        let mut s = spec3(0.1, 1, DirectionSet::Axes6);
        s.polarized = true;
        let g = ModeGrid::log_radial(&s).unwrap();
        assert_eq!(g.len(), 12);
        for m in g.modes() {
            let e = g.polarization_vector(m.index).unwrap();
            assert!(dot3(&e, &m.direction()).abs() < 1e-14);
        }
    }
}
