//! Shared domain types for the corner spectral computations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Tolerance used when classifying a root as real or purely imaginary.
pub const KIND_TOL: f64 = 1e-12;

/// Cosserat spectral parameter `sigma in [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SpectralParam(f64);

impl SpectralParam {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&sigma) {
            return Err(Error::InvalidSigma(sigma));
        }
        Ok(Self(sigma))
    }

    pub fn sigma(self) -> f64 {
        self.0
    }

    /// Poisson-ratio alias `nu = (sigma + 1) / 2` under which the Cosserat
    /// operator coincides with the Lame operator.
    pub fn nu(self) -> f64 {
        0.5 * (self.0 + 1.0)
    }

    pub fn from_nu(nu: f64) -> Result<Self> {
        Self::new(2.0 * nu - 1.0)
    }

    pub fn tag(self) -> TheoryTag {
        TheoryTag::for_sigma(self.0)
    }
}

/// Whether a parameter value lies where the Fredholm theory applies
/// (`sigma` not in `{0, 1/2, 1}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoryTag {
    Regular,
    BoundaryOfTheory,
}

impl TheoryTag {
    pub fn for_sigma(sigma: f64) -> Self {
        if sigma == 0.0 || sigma == 0.5 || sigma == 1.0 {
            TheoryTag::BoundaryOfTheory
        } else {
            TheoryTag::Regular
        }
    }
}

/// Sign `epsilon` selecting one of the two factors of the 2D characteristic
/// equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+1",
            Branch::Minus => "-1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootKind {
    PurelyImaginary,
    PositiveReal,
    General,
}

impl RootKind {
    pub fn classify(lambda: Complex64) -> Self {
        if lambda.re.abs() <= KIND_TOL {
            RootKind::PurelyImaginary
        } else if lambda.im.abs() <= KIND_TOL && lambda.re > 0.0 {
            RootKind::PositiveReal
        } else {
            RootKind::General
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RootKind::PurelyImaginary => "imaginary",
            RootKind::PositiveReal => "positive-real",
            RootKind::General => "general",
        }
    }
}

/// A root of a corner characteristic function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRoot {
    pub lambda: Complex64,
    /// Factor of the 2D characteristic equation, when applicable.
    pub branch: Option<Branch>,
    /// Azimuthal mode of an axisymmetric cone, when applicable.
    pub azimuthal: Option<i32>,
    pub kind: RootKind,
}

impl ComplexRoot {
    pub fn planar(lambda: Complex64, branch: Branch) -> Self {
        Self {
            lambda,
            branch: Some(branch),
            azimuthal: None,
            kind: RootKind::classify(lambda),
        }
    }

    pub fn conical(lambda: Complex64, m: i32) -> Self {
        Self {
            lambda,
            branch: None,
            azimuthal: Some(m),
            kind: RootKind::classify(lambda),
        }
    }
}

/// Closed sub-interval `[lo, hi]` of `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumInterval {
    pub lo: f64,
    pub hi: f64,
}

impl SpectrumInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(Error::InvalidArgument(format!("interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, sigma: f64) -> bool {
        self.lo <= sigma && sigma <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn overlaps(&self, other: &SpectrumInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

/// Outcome status of a root search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Resolved,
    Unresolved,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::Resolved => "resolved",
            SearchStatus::Unresolved => "unresolved",
        }
    }
}
