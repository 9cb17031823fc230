//! Coefficient tables of the stability criterion polynomials.
//!
//! Each polynomial is a list of monomials in `(c1, c2, K, K2, L)`. For GG the
//! `K` slot holds `K1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, CournotError};

/// One monomial `coeff * c1^a c2^b K^k K2^m L^l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub c1: u8,
    pub c2: u8,
    pub k: u8,
    pub k2: u8,
    pub l: u8,
}

const fn t(coeff: f64, c1: u8, c2: u8, k: u8, k2: u8, l: u8) -> Term {
    Term {
        coeff,
        c1,
        c2,
        k,
        k2,
        l,
    }
}

/// Point at which the polynomials are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub c1: f64,
    pub c2: f64,
    pub k: f64,
    pub k2: f64,
    pub l: f64,
}

impl Term {
    fn eval(&self, p: &ParamPoint) -> f64 {
        self.coeff
            * p.c1.powi(self.c1 as i32)
            * p.c2.powi(self.c2 as i32)
            * p.k.powi(self.k as i32)
            * p.k2.powi(self.k2 as i32)
            * p.l.powi(self.l as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CriterionName {
    RGr1,
    RGr2,
    /// The quartic factor of the GR border polynomial.
    SpGr,
    RGb1,
    RGb2,
    RGb3,
    RGl1,
    RGl2,
    RGl3,
    RGa1,
    RGa2,
    RGa3,
    RGg1,
    RGg2,
    RGg3,
    RGg4,
}

impl CriterionName {
    pub const ALL: [CriterionName; 16] = [
        CriterionName::RGr1,
        CriterionName::RGr2,
        CriterionName::SpGr,
        CriterionName::RGb1,
        CriterionName::RGb2,
        CriterionName::RGb3,
        CriterionName::RGl1,
        CriterionName::RGl2,
        CriterionName::RGl3,
        CriterionName::RGa1,
        CriterionName::RGa2,
        CriterionName::RGa3,
        CriterionName::RGg1,
        CriterionName::RGg2,
        CriterionName::RGg3,
        CriterionName::RGg4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CriterionName::RGr1 => "R_GR1",
            CriterionName::RGr2 => "R_GR2",
            CriterionName::SpGr => "SP_GR",
            CriterionName::RGb1 => "R_GB1",
            CriterionName::RGb2 => "R_GB2",
            CriterionName::RGb3 => "R_GB3",
            CriterionName::RGl1 => "R_GL1",
            CriterionName::RGl2 => "R_GL2",
            CriterionName::RGl3 => "R_GL3",
            CriterionName::RGa1 => "R_GA1",
            CriterionName::RGa2 => "R_GA2",
            CriterionName::RGa3 => "R_GA3",
            CriterionName::RGg1 => "R_GG1",
            CriterionName::RGg2 => "R_GG2",
            CriterionName::RGg3 => "R_GG3",
            CriterionName::RGg4 => "R_GG4",
        }
    }

    pub fn terms(self) -> &'static [Term] {
        match self {
            CriterionName::RGr1 => R_GR1,
            CriterionName::RGr2 => R_GR2,
            CriterionName::SpGr => SP_GR,
            CriterionName::RGb1 => R_GB1,
            CriterionName::RGb2 => R_GB2,
            CriterionName::RGb3 => R_GB3,
            CriterionName::RGl1 => R_GL1,
            CriterionName::RGl2 => R_GL2,
            CriterionName::RGl3 => R_GL3,
            CriterionName::RGa1 => R_GA1,
            CriterionName::RGa2 => R_GA2,
            CriterionName::RGa3 => R_GA3,
            CriterionName::RGg1 => R_GG1,
            CriterionName::RGg2 => R_GG2,
            CriterionName::RGg3 => R_GG3,
            CriterionName::RGg4 => R_GG4,
        }
    }

    pub fn eval(self, p: &ParamPoint) -> f64 {
        self.terms().iter().map(|term| term.eval(p)).sum()
    }

    /// Sum of the absolute values of the terms: the natural magnitude
    /// against which the value's sign can be trusted.
    pub fn scale(self, p: &ParamPoint) -> f64 {
        self.terms().iter().map(|term| term.eval(p).abs()).sum()
    }

    /// Value divided by [`scale`](Self::scale), in `[-1, 1]`.
    pub fn normalized(self, p: &ParamPoint) -> f64 {
        let scale = self.scale(p);
        if scale > 0.0 {
            self.eval(p) / scale
        } else {
            0.0
        }
    }
}

impl fmt::Display for CriterionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CriterionName {
    type Err = CournotError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CriterionName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid(format!("unknown criterion '{s}'")))
    }
}

const R_GR1: &[Term] = &[
    t(64.0, 3, 1, 4, 0, 0),
    t(-96.0, 2, 1, 2, 0, 0),
    t(-81.0, 2, 0, 0, 0, 0),
    t(18.0, 1, 1, 0, 0, 0),
    t(-1.0, 0, 2, 0, 0, 0),
];

const R_GR2: &[Term] = &[
    t(1.0, 1, 0, 1, 0, 0),
    t(1.0, 0, 1, 1, 0, 0),
    t(-4.0, 0, 0, 0, 0, 0),
];

const SP_GR: &[Term] = &[
    t(1.0, 3, 1, 4, 0, 0),
    t(-3.0 / 2.0, 2, 1, 2, 0, 0),
    t(-81.0 / 64.0, 2, 0, 0, 0, 0),
    t(9.0 / 32.0, 1, 1, 0, 0, 0),
    t(-1.0 / 64.0, 0, 2, 0, 0, 0),
];

const R_GB1: &[Term] = &[
    t(4.0, 7, 1, 4, 0, 0),
    t(-272.0, 6, 2, 4, 0, 0),
    t(4632.0, 5, 3, 4, 0, 0),
    t(-272.0, 4, 4, 4, 0, 0),
    t(4.0, 3, 5, 4, 0, 0),
    t(264.0, 6, 1, 2, 0, 0),
    t(-2464.0, 5, 2, 2, 0, 0),
    t(-6096.0, 4, 3, 2, 0, 0),
    t(96.0, 3, 4, 2, 0, 0),
    t(8.0, 2, 5, 2, 0, 0),
    t(-81.0, 6, 0, 0, 0, 0),
    t(342.0, 5, 1, 0, 0, 0),
    t(-559.0, 4, 2, 0, 0, 0),
    t(436.0, 3, 3, 0, 0, 0),
    t(-159.0, 2, 4, 0, 0, 0),
    t(22.0, 1, 5, 0, 0, 0),
    t(-1.0, 0, 6, 0, 0, 0),
];

const R_GB2: &[Term] = &[
    t(1.0, 2, 0, 1, 0, 0),
    t(-6.0, 1, 1, 1, 0, 0),
    t(1.0, 0, 2, 1, 0, 0),
    t(4.0, 1, 0, 0, 0, 0),
    t(4.0, 0, 1, 0, 0, 0),
];

const R_GB3: &[Term] = &[
    t(1.0, 2, 0, 1, 0, 0),
    t(-2.0, 1, 1, 1, 0, 0),
    t(1.0, 0, 2, 1, 0, 0),
    t(-2.0, 1, 0, 0, 0, 0),
    t(-2.0, 0, 1, 0, 0, 0),
];

const R_GL1: &[Term] = &[
    t(64.0, 7, 1, 4, 0, 0),
    t(-672.0, 6, 2, 4, 0, 0),
    t(1796.0, 5, 3, 4, 0, 0),
    t(-168.0, 4, 4, 4, 0, 0),
    t(4.0, 3, 5, 4, 0, 0),
    t(384.0, 6, 1, 2, 0, 0),
    t(-400.0, 5, 2, 2, 0, 0),
    t(-2136.0, 4, 3, 2, 0, 0),
    t(96.0, 3, 4, 2, 0, 0),
    t(8.0, 2, 5, 2, 0, 0),
    t(-256.0, 6, 0, 0, 0, 0),
    t(544.0, 5, 1, 0, 0, 0),
    t(-353.0, 4, 2, 0, 0, 0),
    t(100.0, 3, 3, 0, 0, 0),
    t(-38.0, 2, 4, 0, 0, 0),
    t(4.0, 1, 5, 0, 0, 0),
    t(-1.0, 0, 6, 0, 0, 0),
];

const R_GL2: &[Term] = &[
    t(3.0, 1, 0, 1, 0, 0),
    t(-1.0, 0, 1, 1, 0, 0),
    t(2.0, 0, 0, 0, 0, 0),
];

const R_GL3: &[Term] = &[
    t(7.0, 1, 1, 1, 0, 0),
    t(-1.0, 0, 2, 1, 0, 0),
    t(-8.0, 1, 0, 0, 0, 0),
    t(-4.0, 0, 1, 0, 0, 0),
];

const R_GA1: &[Term] = &[
    t(64.0, 7, 1, 4, 0, 4),
    t(-256.0, 6, 2, 4, 0, 4),
    t(384.0, 5, 3, 4, 0, 4),
    t(-256.0, 4, 4, 4, 0, 4),
    t(64.0, 3, 5, 4, 0, 4),
    t(-384.0, 7, 1, 4, 0, 3),
    t(2560.0, 6, 2, 4, 0, 3),
    t(-4352.0, 5, 3, 4, 0, 3),
    t(2560.0, 4, 4, 4, 0, 3),
    t(-384.0, 3, 5, 4, 0, 3),
    t(864.0, 7, 1, 4, 0, 2),
    t(-8576.0, 6, 2, 4, 0, 2),
    t(19520.0, 5, 3, 4, 0, 2),
    t(-8576.0, 4, 4, 4, 0, 2),
    t(864.0, 3, 5, 4, 0, 2),
    t(-864.0, 7, 1, 4, 0, 1),
    t(11904.0, 6, 2, 4, 0, 1),
    t(-96.0, 6, 1, 2, 0, 4),
    t(-38464.0, 5, 3, 4, 0, 1),
    t(384.0, 5, 2, 2, 0, 4),
    t(11904.0, 4, 4, 4, 0, 1),
    t(-576.0, 4, 3, 2, 0, 4),
    t(-864.0, 3, 5, 4, 0, 1),
    t(384.0, 3, 4, 2, 0, 4),
    t(-96.0, 2, 5, 2, 0, 4),
    t(324.0, 7, 1, 4, 0, 0),
    t(-5904.0, 6, 2, 4, 0, 0),
    t(96.0, 6, 1, 2, 0, 3),
    t(27544.0, 5, 3, 4, 0, 0),
    t(-2944.0, 5, 2, 2, 0, 3),
    t(-5904.0, 4, 4, 4, 0, 0),
    t(6208.0, 4, 3, 2, 0, 3),
    t(324.0, 3, 5, 4, 0, 0),
    t(-3968.0, 3, 4, 2, 0, 3),
    t(608.0, 2, 5, 2, 0, 3),
    t(1416.0, 6, 1, 2, 0, 2),
    t(5728.0, 5, 2, 2, 0, 2),
    t(-27344.0, 4, 3, 2, 0, 2),
    t(13408.0, 3, 4, 2, 0, 2),
    t(-1400.0, 2, 5, 2, 0, 2),
    t(-3744.0, 6, 1, 2, 0, 1),
    t(-81.0, 6, 0, 0, 0, 4),
    t(128.0, 5, 2, 2, 0, 1),
    t(342.0, 5, 1, 0, 0, 4),
    t(53312.0, 4, 3, 2, 0, 1),
    t(-559.0, 4, 2, 0, 0, 4),
    t(-18304.0, 3, 4, 2, 0, 1),
    t(436.0, 3, 3, 0, 0, 4),
    t(1376.0, 2, 5, 2, 0, 1),
    t(-159.0, 2, 4, 0, 0, 4),
    t(22.0, 1, 5, 0, 0, 4),
    t(-1.0, 0, 6, 0, 0, 4),
    t(2592.0, 6, 1, 2, 0, 0),
    t(648.0, 6, 0, 0, 0, 3),
    t(-5760.0, 5, 2, 2, 0, 0),
    t(-2736.0, 5, 1, 0, 0, 3),
    t(-37696.0, 4, 3, 2, 0, 0),
    t(4472.0, 4, 2, 0, 0, 3),
    t(8576.0, 3, 4, 2, 0, 0),
    t(-3488.0, 3, 3, 0, 0, 3),
    t(-480.0, 2, 5, 2, 0, 0),
    t(1272.0, 2, 4, 0, 0, 3),
    t(-176.0, 1, 5, 0, 0, 3),
    t(8.0, 0, 6, 0, 0, 3),
    t(-1944.0, 6, 0, 0, 0, 2),
    t(8208.0, 5, 1, 0, 0, 2),
    t(-13416.0, 4, 2, 0, 0, 2),
    t(10464.0, 3, 3, 0, 0, 2),
    t(-3816.0, 2, 4, 0, 0, 2),
    t(528.0, 1, 5, 0, 0, 2),
    t(-24.0, 0, 6, 0, 0, 2),
    t(2592.0, 6, 0, 0, 0, 1),
    t(-10944.0, 5, 1, 0, 0, 1),
    t(17888.0, 4, 2, 0, 0, 1),
    t(-13952.0, 3, 3, 0, 0, 1),
    t(5088.0, 2, 4, 0, 0, 1),
    t(-704.0, 1, 5, 0, 0, 1),
    t(32.0, 0, 6, 0, 0, 1),
    t(-1296.0, 6, 0, 0, 0, 0),
    t(5472.0, 5, 1, 0, 0, 0),
    t(-8944.0, 4, 2, 0, 0, 0),
    t(6976.0, 3, 3, 0, 0, 0),
    t(-2544.0, 2, 4, 0, 0, 0),
    t(352.0, 1, 5, 0, 0, 0),
    t(-16.0, 0, 6, 0, 0, 0),
];

const R_GA2: &[Term] = &[
    t(1.0, 2, 0, 1, 0, 1),
    t(2.0, 1, 1, 1, 0, 1),
    t(1.0, 0, 2, 1, 0, 1),
    t(-4.0, 1, 1, 1, 0, 0),
    t(-2.0, 1, 0, 0, 0, 1),
    t(-2.0, 0, 1, 0, 0, 1),
];

const R_GA3: &[Term] = &[
    t(1.0, 2, 0, 1, 0, 1),
    t(2.0, 1, 1, 1, 0, 1),
    t(1.0, 0, 2, 1, 0, 1),
    t(-8.0, 1, 1, 1, 0, 0),
    t(-4.0, 1, 0, 0, 0, 1),
    t(-4.0, 0, 1, 0, 0, 1),
    t(8.0, 1, 0, 0, 0, 0),
    t(8.0, 0, 1, 0, 0, 0),
];

const R_GG1: &[Term] = &[
    t(-1024.0, 3, 3, 4, 4, 0),
    t(384.0, 3, 2, 4, 2, 0),
    t(384.0, 3, 2, 3, 3, 0),
    t(384.0, 2, 3, 3, 3, 0),
    t(384.0, 2, 3, 2, 4, 0),
    t(1.0, 4, 0, 4, 0, 0),
    t(-18.0, 3, 1, 4, 0, 0),
    t(-32.0, 3, 1, 3, 1, 0),
    t(-18.0, 3, 1, 2, 2, 0),
    t(81.0, 2, 2, 4, 0, 0),
    t(288.0, 2, 2, 3, 1, 0),
    t(420.0, 2, 2, 2, 2, 0),
    t(288.0, 2, 2, 1, 3, 0),
    t(81.0, 2, 2, 0, 4, 0),
    t(-18.0, 1, 3, 2, 2, 0),
    t(-32.0, 1, 3, 1, 3, 0),
    t(-18.0, 1, 3, 0, 4, 0),
    t(1.0, 0, 4, 0, 4, 0),
];

const R_GG2: &[Term] = &[
    t(-64.0, 4, 4, 4, 4, 0),
    t(96.0, 4, 3, 4, 2, 0),
    t(-32.0, 4, 3, 3, 3, 0),
    t(-32.0, 3, 4, 3, 3, 0),
    t(96.0, 3, 4, 2, 4, 0),
    t(1.0, 5, 1, 4, 0, 0),
    t(-18.0, 4, 2, 4, 0, 0),
    t(32.0, 4, 2, 3, 1, 0),
    t(-18.0, 4, 2, 2, 2, 0),
    t(81.0, 3, 3, 4, 0, 0),
    t(96.0, 3, 3, 3, 1, 0),
    t(-92.0, 3, 3, 2, 2, 0),
    t(96.0, 3, 3, 1, 3, 0),
    t(81.0, 3, 3, 0, 4, 0),
    t(-18.0, 2, 4, 2, 2, 0),
    t(32.0, 2, 4, 1, 3, 0),
    t(-18.0, 2, 4, 0, 4, 0),
    t(1.0, 1, 5, 0, 4, 0),
    t(8.0, 4, 1, 2, 0, 0),
    t(-8.0, 4, 1, 1, 1, 0),
    t(-16.0, 3, 2, 2, 0, 0),
    t(-120.0, 3, 2, 1, 1, 0),
    t(-120.0, 3, 2, 0, 2, 0),
    t(-120.0, 2, 3, 2, 0, 0),
    t(-120.0, 2, 3, 1, 1, 0),
    t(-16.0, 2, 3, 0, 2, 0),
    t(-8.0, 1, 4, 1, 1, 0),
    t(8.0, 1, 4, 0, 2, 0),
    t(-4.0, 4, 0, 0, 0, 0),
    t(16.0, 3, 1, 0, 0, 0),
    t(-24.0, 2, 2, 0, 0, 0),
    t(16.0, 1, 3, 0, 0, 0),
    t(-4.0, 0, 4, 0, 0, 0),
];

const R_GG3: &[Term] = &[
    t(1.0, 1, 0, 1, 1, 0),
    t(1.0, 0, 1, 1, 1, 0),
    t(-2.0, 0, 0, 1, 0, 0),
    t(-2.0, 0, 0, 0, 1, 0),
];

const R_GG4: &[Term] = &[
    t(1.0, 2, 1, 1, 1, 0),
    t(1.0, 1, 2, 1, 1, 0),
    t(-4.0, 1, 1, 1, 0, 0),
    t(-4.0, 1, 1, 0, 1, 0),
    t(4.0, 1, 0, 0, 0, 0),
    t(4.0, 0, 1, 0, 0, 0),
];
