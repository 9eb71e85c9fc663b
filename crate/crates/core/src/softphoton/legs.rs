use crate::{dot3, norm3, Error, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegDirection {
    In,
    Out,
}

impl LegDirection {
    pub fn sign(self) -> f64 {
        match self {
            LegDirection::In => -1.0,
            LegDirection::Out => 1.0,
        }
    }
}

/// A massive external particle moving along `x = τ v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargedLeg {
    four_velocity: [f64; 4],
    charge: f64,
    direction: LegDirection,
}

impl ChargedLeg {
    /// Metric `(+,−,−,−)`; requires `v·v = 1` within 1e-12 and `v⁰ >= 1`.
    pub fn new(four_velocity: [f64; 4], charge: f64, direction: LegDirection) -> Result<Self> {
        if four_velocity.iter().any(|c| !c.is_finite()) || !charge.is_finite() {
            return Err(Error::arg("leg four-velocity and charge must be finite"));
        }
        let [v0, v1, v2, v3] = four_velocity;
        let norm = v0 * v0 - v1 * v1 - v2 * v2 - v3 * v3;
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::arg(format!("four-velocity has v·v = {norm}, expected 1")));
        }
        if v0 < 1.0 {
            return Err(Error::arg("four-velocity must be future directed with v⁰ >= 1"));
        }
        Ok(Self {
            four_velocity,
            charge,
            direction,
        })
    }

    /// Leg with three-velocity `β`, `|β| < 1`.
    pub fn from_velocity(beta: Vec3, charge: f64, direction: LegDirection) -> Result<Self> {
        let b = norm3(&beta);
        if !(b < 1.0) {
            return Err(Error::arg(format!("|β| = {b} is not below 1")));
        }
        let gamma = 1.0 / (1.0 - b * b).sqrt();
        let mut v = [gamma, gamma * beta[0], gamma * beta[1], gamma * beta[2]];
        // restore v·v = 1 exactly up to rounding in v⁰
        v[0] = (1.0 + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]).sqrt();
        Self::new(v, charge, direction)
    }

    pub fn four_velocity(&self) -> [f64; 4] {
        self.four_velocity
    }

    pub fn spatial(&self) -> Vec3 {
        [self.four_velocity[1], self.four_velocity[2], self.four_velocity[3]]
    }

    pub fn velocity(&self) -> Vec3 {
        let v0 = self.four_velocity[0];
        let s = self.spatial();
        [s[0] / v0, s[1] / v0, s[2] / v0]
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn direction(&self) -> LegDirection {
        self.direction
    }

    /// Charge with the in/out sign of the ray current.
    pub fn signed_charge(&self) -> f64 {
        self.direction.sign() * self.charge
    }

    /// Minkowski product with another four-velocity.
    pub fn dot(&self, other: &ChargedLeg) -> f64 {
        let a = self.four_velocity;
        let b = other.four_velocity;
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    }

    pub fn with_charge(&self, charge: f64) -> Self {
        Self { charge, ..*self }
    }

    /// Boost along z with the given rapidity.
    pub fn boosted_z(&self, rapidity: f64) -> Self {
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        let [v0, v1, v2, v3] = self.four_velocity;
        let v3b = ch * v3 + sh * v0;
        let v0b = (1.0 + v1 * v1 + v2 * v2 + v3b * v3b).sqrt();
        Self {
            four_velocity: [v0b, v1, v2, v3b],
            ..*self
        }
    }
}

/// External legs of a hard process with its cross section without soft
/// radiation.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessCurrents {
    legs: Vec<ChargedLeg>,
    sigma0: f64,
}

impl ProcessCurrents {
    /// Rejects processes whose incoming and outgoing charges differ.
    pub fn new(legs: Vec<ChargedLeg>, sigma0: f64) -> Result<Self> {
        if !(sigma0 > 0.0 && sigma0.is_finite()) {
            return Err(Error::arg("hard cross section σ0 must be positive"));
        }
        let net: f64 = legs.iter().map(|l| l.signed_charge()).sum();
        let scale: f64 = legs.iter().map(|l| l.charge.abs()).sum::<f64>().max(1.0);
        if net.abs() > 1e-12 * scale {
            return Err(Error::arg(format!("charge is not conserved (out − in = {net})")));
        }
        Ok(Self { legs, sigma0 })
    }

    pub fn legs(&self) -> &[ChargedLeg] {
        &self.legs
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn charge_conjugated(&self) -> Self {
        self.scaled_charges(-1.0)
    }

    pub fn scaled_charges(&self, factor: f64) -> Self {
        Self {
            legs: self.legs.iter().map(|l| l.with_charge(factor * l.charge)).collect(),
            sigma0: self.sigma0,
        }
    }

    pub fn boosted_z(&self, rapidity: f64) -> Self {
        Self {
            legs: self.legs.iter().map(|l| l.boosted_z(rapidity)).collect(),
            sigma0: self.sigma0,
        }
    }
}

/// Transversal soft current at the null direction `k = (1, k̂)`.
///
/// For point-like ray currents the amplitude is real.
pub fn soft_current(process: &ProcessCurrents, khat: &Vec3) -> Result<Vec3> {
    let n = norm3(khat);
    if !((n - 1.0).abs() <= 1e-9) {
        return Err(Error::arg(format!("photon direction must be a unit vector (|k̂| = {n})")));
    }
    let mut j = [0.0; 3];
    for leg in &process.legs {
        let v = leg.spatial();
        let vk = leg.four_velocity[0] - dot3(&v, khat);
        if vk < 1e-9 {
            return Err(Error::domain(format!("leg nearly collinear with k̂ (v·k = {vk:e})")));
        }
        let c = leg.signed_charge() / vk;
        for mu in 0..3 {
            j[mu] += c * v[mu];
        }
    }
    let along = dot3(&j, khat);
    for mu in 0..3 {
        j[mu] -= along * khat[mu];
    }
    Ok(j)
}
