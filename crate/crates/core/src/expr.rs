//! Operator expressions with two independent evaluation routes.
//!
//! [`Expr::eval`] multiplies out with the normal-ordering engine.
//! [`Expr::apply`] never forms a product: it acts on a test function
//! factor by factor, right to left, and a commutator `[A, B] f` becomes
//! `A(B f) - B(A f)`. Cached nodes carry both the engine's value and the
//! definition it was computed from; `apply` follows the definition.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::coeff::Rational;
use crate::weyl::{LaurentPoly, Operator};
use crate::Result;

#[derive(Clone, Debug)]
pub enum Expr {
    Op(Arc<Operator>),
    Scale(Rational, Box<Expr>),
    Sum(Vec<Expr>),
    /// Left-to-right product.
    Product(Vec<Expr>),
    Commutator(Box<Expr>, Box<Expr>),
    Cached { value: Arc<Operator>, definition: Arc<Expr> },
}

impl Expr {
    pub fn op(op: Operator) -> Self {
        Expr::Op(Arc::new(op))
    }

    pub fn leaf(op: &Arc<Operator>) -> Self {
        Expr::Op(op.clone())
    }

    pub fn scale(k: Rational, e: Expr) -> Self {
        Expr::Scale(k, Box::new(e))
    }

    pub fn neg(e: Expr) -> Self {
        Self::scale(-Rational::ONE, e)
    }

    pub fn sum(items: impl IntoIterator<Item = Expr>) -> Self {
        Expr::Sum(items.into_iter().collect())
    }

    pub fn diff(a: Expr, b: Expr) -> Self {
        Expr::Sum(alloc::vec![a, Self::neg(b)])
    }

    pub fn product(a: Expr, b: Expr) -> Self {
        Expr::Product(alloc::vec![a, b])
    }

    pub fn commutator(a: Expr, b: Expr) -> Self {
        Expr::Commutator(Box::new(a), Box::new(b))
    }

    /// Evaluates the definition once and keeps both.
    pub fn cached(definition: Expr) -> Self {
        let value = definition.eval();
        Expr::Cached { value, definition: Arc::new(definition) }
    }

    /// The symbolic value, via the normal-ordering product.
    pub fn eval(&self) -> Arc<Operator> {
        match self {
            Expr::Op(op) => op.clone(),
            Expr::Cached { value, .. } => value.clone(),
            Expr::Scale(k, e) => Arc::new(e.eval().scale(k)),
            Expr::Sum(items) => {
                let mut it = items.iter();
                let first = it.next().expect("empty sum").eval();
                let mut acc = (*first).clone();
                for e in it {
                    acc = &acc + &*e.eval();
                }
                Arc::new(acc)
            }
            Expr::Product(items) => {
                let mut it = items.iter();
                let first = it.next().expect("empty product").eval();
                let mut acc = (*first).clone();
                for e in it {
                    acc = &acc * &*e.eval();
                }
                Arc::new(acc)
            }
            Expr::Commutator(a, b) => Arc::new(a.eval().commutator(&b.eval())),
        }
    }

    /// Acts on `f` without forming any operator product.
    pub fn apply(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        match self {
            Expr::Op(op) => op.apply(f),
            Expr::Cached { definition, .. } => definition.apply(f),
            Expr::Scale(k, e) => LaurentPoly::zero(f.signature()).add_scaled(&e.apply(f)?, k),
            Expr::Sum(items) => {
                let mut acc = LaurentPoly::zero(f.signature());
                for e in items {
                    acc = acc.add_scaled(&e.apply(f)?, &Rational::ONE)?;
                }
                Ok(acc)
            }
            Expr::Product(items) => {
                let mut acc = f.clone();
                for e in items.iter().rev() {
                    acc = e.apply(&acc)?;
                }
                Ok(acc)
            }
            Expr::Commutator(a, b) => {
                let ab = a.apply(&b.apply(f)?)?;
                let ba = b.apply(&a.apply(f)?)?;
                ab.add_scaled(&ba, &-Rational::ONE)
            }
        }
    }

    /// Per-variable bound on the derivative order of the expression.
    pub fn derivative_bounds(&self, num_vars: usize) -> Vec<u32> {
        match self {
            Expr::Op(op) => op.max_derivative_exponents().iter().map(|&b| b as u32).collect(),
            Expr::Cached { value, .. } => {
                value.max_derivative_exponents().iter().map(|&b| b as u32).collect()
            }
            Expr::Scale(_, e) => e.derivative_bounds(num_vars),
            Expr::Sum(items) => items.iter().fold(alloc::vec![0; num_vars], |acc, e| {
                acc.iter().zip(e.derivative_bounds(num_vars)).map(|(a, b)| (*a).max(b)).collect()
            }),
            Expr::Product(items) => items.iter().fold(alloc::vec![0; num_vars], |acc, e| {
                acc.iter().zip(e.derivative_bounds(num_vars)).map(|(a, b)| a + b).collect()
            }),
            Expr::Commutator(a, b) => a
                .derivative_bounds(num_vars)
                .iter()
                .zip(b.derivative_bounds(num_vars))
                .map(|(x, y)| x + y)
                .collect(),
        }
    }
}
