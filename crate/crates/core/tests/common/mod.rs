//! Reference connection matrices and small helpers shared by the integration tests.
#![allow(dead_code)]

use crgsys::linalg::Matrix;
use crgsys::poly::{parse_expr, Alphabet, MPoly, RatFun};

/// `I3` stands for i·√3.
pub fn z(text: &str) -> MPoly {
    let text = text.replace("I3", "(zeta^3*(zeta+zeta^11))");
    parse_expr(&text, Alphabet::Z, 2, 12).unwrap()
}

pub fn x(text: &str) -> MPoly {
    parse_expr(text, Alphabet::X, 2, 12).unwrap()
}

pub type Entry = (&'static str, &'static str);

pub struct Reference {
    pub group: &'static str,
    /// `D` in the denominators is substituted by `delta`.
    pub delta: &'static str,
    pub a: [[[Entry; 2]; 2]; 2],
}

pub const REFERENCE: &[Reference] = &[
    Reference {
        group: "G(2,1,2)",
        delta: "z1^2 - 4*z2",
        a: [
            [[("z1", "2*D"), ("-2", "2*D")], [("-2*z2", "2*D"), ("z1", "2*D")]],
            [[("-2", "2*D"), ("z1", "2*z2*D")], [("z1", "2*D"), ("z1^2 - 6*z2", "2*z2*D")]],
        ],
    },
    Reference {
        group: "G4",
        delta: "z1^3 - 12*I3*z2^2",
        a: [
            [[("3*z1^2", "4*D"), ("-6*I3*z2", "D")], [("-15*z1*z2", "8*D"), ("5*z1^2", "4*D")]],
            [[("-6*I3*z2", "D"), ("4*I3*z1", "D")], [("5*z1^2", "4*D"), ("-10*I3*z2", "D")]],
        ],
    },
    Reference {
        group: "G5",
        delta: "z1 - 12*I3*z2^2",
        a: [
            [[("11*z1 - 96*I3*z2^2", "12*z1*D"), ("-6*I3*z2", "D")], [("-5*z2", "24*z1*D"), ("-5", "12*D")]],
            [[("-6*I3*z2", "D"), ("12*I3*z1", "D")], [("-5", "12*D"), ("-10*I3*z2", "D")]],
        ],
    },
    Reference {
        group: "G6",
        delta: "z1^3 - 12*I3*z2",
        a: [
            [[("3*z1^2", "4*D"), ("3*I3", "D")], [("-15*z1*z2", "4*D"), ("5*z1^2", "4*D")]],
            [[("3*I3", "D"), ("I3*z1", "z2*D")], [("5*z1^2", "4*D"), ("z1^3 - 22*I3*z2", "2*z2*D")]],
        ],
    },
    Reference {
        group: "G7",
        delta: "z1 - 12*I3*z2",
        a: [
            [[("11*z1 - 96*I3*z2", "12*z1*D"), ("3*I3", "D")], [("-5*z2", "12*z1*D"), ("-5", "12*D")]],
            [[("3*I3", "D"), ("3*I3*z1", "z2*D")], [("-5", "12*D"), ("z1 - 22*I3*z2", "2*z2*D")]],
        ],
    },
];

/// Entries (matrix, row, col), 1-based, whose sign in the reference table
/// disagrees with the integrable system.
pub const SIGN_ERRATA: &[(&str, usize, usize, usize)] = &[
    ("G5", 1, 2, 2),
    ("G5", 2, 2, 1),
    ("G6", 1, 1, 2),
    ("G6", 2, 1, 1),
    ("G7", 1, 1, 2),
    ("G7", 1, 2, 2),
    ("G7", 2, 1, 1),
    ("G7", 2, 2, 1),
];

impl Reference {
    pub fn get(group: &str) -> &'static Reference {
        REFERENCE.iter().find(|r| r.group == group).unwrap()
    }

    pub fn entry(&self, ell: usize, r: usize, c: usize) -> RatFun {
        let (num, den) = self.a[ell][r][c];
        let den = den.replace('D', &format!("({})", self.delta));
        RatFun::new(z(num), z(&den)).unwrap()
    }

    pub fn matrices(&self) -> Vec<Matrix<RatFun>> {
        (0..2).map(|l| Matrix::from_fn(2, 2, |r, c| self.entry(l, r, c))).collect()
    }

    /// The table with the listed sign errata corrected.
    pub fn corrected(&self) -> Vec<Matrix<RatFun>> {
        let mut m = self.matrices();
        for &(g, l, r, c) in SIGN_ERRATA {
            if g == self.group {
                let e = m[l - 1].get(r - 1, c - 1).clone();
                m[l - 1].set(r - 1, c - 1, RatFun::new(-e.num(), e.den().clone()).unwrap());
            }
        }
        m
    }
}

/// Entries (1-based) where `got` and `want` differ under cross-multiplication.
pub fn mismatches(got: &[Matrix<RatFun>], want: &[Matrix<RatFun>]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (l, (g, w)) in got.iter().zip(want).enumerate() {
        for (r, c, e) in g.indexed() {
            if !e.rf_eq(w.get(r, c)) {
                out.push((l + 1, r + 1, c + 1));
            }
        }
    }
    out
}
