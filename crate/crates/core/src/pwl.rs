//! Piecewise linear functions and right-continuous step functions on an interval `(−∞, R)`.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::num::{lift, to_f64, ExtReal, Rational};

/// Affine piece `x ↦ slope·x + intercept` valid from `start` up to the next piece.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub start: ExtReal,
    pub slope: Rational,
    pub intercept: Rational,
}

impl Piece {
    pub fn at(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Breakpoint {
    pub x: Rational,
    pub left_value: Rational,
    pub right_value: Rational,
    pub slope_right: Rational,
}

/// Right-continuous piecewise linear function on `(−∞, right)` or `(−∞, right]`.
///
/// An empty domain is allowed; only the value at `−∞` is then stored.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinearFn {
    pieces: Vec<Piece>,
    right: ExtReal,
    right_closed: bool,
    at_neg_inf: ExtReal,
}

impl PiecewiseLinearFn {
    /// `pieces` must be non-empty, start at `−∞` and have strictly increasing starts.
    pub fn new(pieces: Vec<Piece>, right: ExtReal, right_closed: bool) -> Self {
        assert!(!pieces.is_empty(), "at least one piece");
        assert_eq!(pieces[0].start, ExtReal::NegInf, "first piece starts at -inf");
        debug_assert!(pieces.windows(2).all(|w| w[0].start < w[1].start));
        let first = &pieces[0];
        let at_neg_inf = if first.slope.is_zero() {
            ExtReal::Finite(first.intercept.clone())
        } else if first.slope > Rational::zero() {
            ExtReal::NegInf
        } else {
            ExtReal::PosInf
        };
        let right_closed = right_closed && !matches!(right, ExtReal::PosInf);
        PiecewiseLinearFn {
            pieces,
            right,
            right_closed,
            at_neg_inf,
        }
    }

    /// Function with empty domain, remembering only its value at `−∞`.
    pub fn degenerate(at_neg_inf: ExtReal) -> Self {
        PiecewiseLinearFn {
            pieces: Vec::new(),
            right: ExtReal::NegInf,
            right_closed: false,
            at_neg_inf,
        }
    }

    pub fn is_empty_domain(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn right(&self) -> &ExtReal {
        &self.right
    }

    pub fn right_closed(&self) -> bool {
        self.right_closed
    }

    pub fn at_neg_inf(&self) -> &ExtReal {
        &self.at_neg_inf
    }

    pub fn in_domain(&self, x: &Rational) -> bool {
        if self.pieces.is_empty() {
            return false;
        }
        match &self.right {
            ExtReal::PosInf => true,
            ExtReal::Finite(r) => x < r || (self.right_closed && x == r),
            ExtReal::NegInf => false,
        }
    }

    fn piece_index(&self, x: &Rational) -> usize {
        let fx = ExtReal::Finite(x.clone());
        self.pieces.partition_point(|p| p.start <= fx) - 1
    }

    pub fn piece_at(&self, x: &Rational) -> Option<&Piece> {
        self.in_domain(x).then(|| &self.pieces[self.piece_index(x)])
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        self.piece_at(x).map(|p| p.at(x))
    }

    /// Value at a point of `{−∞} ∪ domain`.
    pub fn eval_ext(&self, x: &ExtReal) -> Option<ExtReal> {
        match x {
            ExtReal::NegInf => Some(self.at_neg_inf.clone()),
            ExtReal::Finite(r) => self.eval(r).map(ExtReal::Finite),
            ExtReal::PosInf => None,
        }
    }

    pub fn eval_f64(&self, x: f64) -> Option<f64> {
        if x == f64::NEG_INFINITY {
            return Some(self.at_neg_inf.to_f64());
        }
        if !x.is_finite() {
            return None;
        }
        self.eval(&lift(x)).map(|v| to_f64(&v))
    }

    /// Limit from the left at `x`; at the open right end this is the boundary limit.
    pub fn left_limit(&self, x: &Rational) -> Option<Rational> {
        if self.pieces.is_empty() {
            return None;
        }
        if let ExtReal::Finite(r) = &self.right {
            if x > r {
                return None;
            }
        }
        let fx = ExtReal::Finite(x.clone());
        let i = self.pieces.partition_point(|p| p.start < fx);
        Some(self.pieces[i.max(1) - 1].at(x))
    }

    pub fn breakpoints(&self) -> Vec<Breakpoint> {
        self.pieces
            .windows(2)
            .map(|w| {
                let x = w[1].start.finite().expect("finite breakpoint").clone();
                Breakpoint {
                    left_value: w[0].at(&x),
                    right_value: w[1].at(&x),
                    slope_right: w[1].slope.clone(),
                    x,
                }
            })
            .collect()
    }

    /// `sup { p·x − f(x) : x in domain, x ≥ from }`, with `from = None` meaning the whole domain
    /// together with the limit at `−∞` (where `0·(−∞) = 0`).
    pub fn sup_linear_minus(&self, p: &Rational, from: Option<&Rational>) -> ExtReal {
        if self.pieces.is_empty() {
            return match from {
                None if p.is_zero() => self.at_neg_inf.neg(),
                _ => ExtReal::NegInf,
            };
        }
        let mut best = ExtReal::NegInf;
        let first_breakpoint = match from {
            None => {
                let first = &self.pieces[0];
                let drift = p - &first.slope;
                if drift < Rational::zero() {
                    return ExtReal::PosInf;
                }
                if drift.is_zero() {
                    best = ExtReal::Finite(-&first.intercept);
                }
                1
            }
            Some(x) => {
                if !self.in_domain(x) {
                    return ExtReal::NegInf;
                }
                let i = self.piece_index(x);
                best = ExtReal::Finite(p * x - self.pieces[i].at(x));
                i + 1
            }
        };
        for i in first_breakpoint..self.pieces.len() {
            let x = self.pieces[i].start.finite().expect("finite breakpoint");
            let px = p * x;
            let left = ExtReal::Finite(&px - self.pieces[i - 1].at(x));
            let here = ExtReal::Finite(px - self.pieces[i].at(x));
            best = best.max(left).max(here);
        }
        let last = self.pieces.last().expect("non-empty");
        match &self.right {
            ExtReal::PosInf => {
                if p > &last.slope {
                    return ExtReal::PosInf;
                }
            }
            ExtReal::Finite(r) => {
                best = best.max(ExtReal::Finite(p * r - last.at(r)));
            }
            ExtReal::NegInf => {}
        }
        best
    }
}

/// Right-continuous non-decreasing integer-valued step function, 0 before the first jump.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    jumps: Vec<(Rational, usize)>,
    right: ExtReal,
    right_closed: bool,
}

impl StepFunction {
    /// `jumps` lists `(location, level from there on)` with strictly increasing locations.
    pub fn new(jumps: Vec<(Rational, usize)>, right: ExtReal, right_closed: bool) -> Self {
        debug_assert!(jumps.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
        StepFunction {
            jumps,
            right,
            right_closed,
        }
    }

    pub fn empty() -> Self {
        StepFunction {
            jumps: Vec::new(),
            right: ExtReal::NegInf,
            right_closed: false,
        }
    }

    pub fn jumps(&self) -> &[(Rational, usize)] {
        &self.jumps
    }

    pub fn right(&self) -> &ExtReal {
        &self.right
    }

    pub fn in_domain(&self, x: &Rational) -> bool {
        match &self.right {
            ExtReal::PosInf => true,
            ExtReal::Finite(r) => x < r || (self.right_closed && x == r),
            ExtReal::NegInf => false,
        }
    }

    pub fn eval(&self, x: &Rational) -> Option<usize> {
        if !self.in_domain(x) {
            return None;
        }
        let i = self.jumps.partition_point(|(loc, _)| loc <= x);
        Some(if i == 0 { 0 } else { self.jumps[i - 1].1 })
    }

    pub fn eval_ext(&self, x: &ExtReal) -> Option<usize> {
        match x {
            ExtReal::NegInf => Some(0),
            ExtReal::Finite(r) => self.eval(r),
            ExtReal::PosInf => None,
        }
    }

    pub fn eval_f64(&self, x: f64) -> Option<usize> {
        if x == f64::NEG_INFINITY {
            Some(0)
        } else if x.is_finite() {
            self.eval(&lift(x))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, ratio};
    use alloc::vec;

    fn piece(start: ExtReal, slope: i64, intercept: i64) -> Piece {
        Piece {
            start,
            slope: int(slope),
            intercept: int(intercept),
        }
    }

    fn bent_trace() -> PiecewiseLinearFn {
        PiecewiseLinearFn::new(
            vec![piece(ExtReal::NegInf, 0, 0), piece(ExtReal::from(-1), 1, 1)],
            ExtReal::from(1),
            false,
        )
    }

    #[test]
    fn evaluation_and_domain() {
        let f = bent_trace();
        assert_eq!(f.eval(&int(-5)), Some(int(0)));
        assert_eq!(f.eval(&ratio(1, 2)), Some(ratio(3, 2)));
        assert_eq!(f.eval(&int(1)), None);
        assert_eq!(f.left_limit(&int(1)), Some(int(2)));
        assert_eq!(f.eval_ext(&ExtReal::NegInf), Some(ExtReal::zero()));
    }

    #[test]
    fn conjugate_sup_uses_open_end_limit() {
        let f = bent_trace();
        assert_eq!(f.sup_linear_minus(&int(3), None), ExtReal::from(1));
        assert_eq!(f.sup_linear_minus(&int(0), None), ExtReal::zero());
        assert_eq!(f.sup_linear_minus(&int(1), None), ExtReal::from(-1));
    }

    #[test]
    fn conjugate_sup_sees_jumps() {
        let f = PiecewiseLinearFn::new(
            vec![piece(ExtReal::NegInf, 0, 0), piece(ExtReal::from(2), 3, -1)],
            ExtReal::PosInf,
            false,
        );
        assert_eq!(f.breakpoints()[0].left_value, int(0));
        assert_eq!(f.breakpoints()[0].right_value, int(5));
        assert_eq!(f.sup_linear_minus(&int(1), None), ExtReal::from(2));
        assert_eq!(f.sup_linear_minus(&int(4), None), ExtReal::PosInf);
        assert_eq!(f.sup_linear_minus(&int(1), Some(&int(3))), ExtReal::from(-5));
    }

    #[test]
    fn degenerate_function() {
        let f = PiecewiseLinearFn::degenerate(ExtReal::from(-4));
        assert_eq!(f.sup_linear_minus(&int(0), None), ExtReal::from(4));
        assert_eq!(f.sup_linear_minus(&int(2), None), ExtReal::NegInf);
        assert_eq!(f.eval(&int(0)), None);
    }

    #[test]
    fn steps_are_right_continuous() {
        let s = StepFunction::new(vec![(int(1), 2), (int(2), 4), (int(5), 5)], ExtReal::PosInf, false);
        assert_eq!(s.eval(&ratio(1, 2)), Some(0));
        assert_eq!(s.eval(&int(1)), Some(2));
        assert_eq!(s.eval(&ratio(19, 10)), Some(2));
        assert_eq!(s.eval(&int(2)), Some(4));
        assert_eq!(s.eval(&int(7)), Some(5));
        assert_eq!(s.eval_ext(&ExtReal::NegInf), Some(0));
    }
}
