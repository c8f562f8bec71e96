//! Scalar functions of the number operator.
//!
//! A [`Symbol`] is an expression tree over `N` that can be evaluated at any
//! basis index `n`. Evaluation either yields a complex number or reports the
//! point as singular; it never produces `NaN` or an infinity.
//!
//! Two kinds of index shift live in the tree and they mean different things:
//!
//! * [`Symbol::number`]`(k)` is the shifted number operator `N + k`. Reading it
//!   at a point with `n + k < 0` asks for an eigenvalue below the vacuum and is
//!   singular.
//! * [`Symbol::at`]`(k, s)` evaluates `s` on the basis state `|n + k>`. It is
//!   produced by operator composition and records the intermediate state a
//!   factor acts on. When `n + k < 0` that state does not exist, the factor is
//!   never reached and the node evaluates to zero without looking at `s`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 math shadows this when std is linked
use num_traits::Float;

/// Default magnitude below which a divisor counts as zero.
pub const DEFAULT_SIGMA: f64 = 1e-12;

/// Below this magnitude `sinc` switches to its Taylor series.
const SINC_TAYLOR_RADIUS: f64 = 1e-2;

/// Marker returned when evaluation hits a singular point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Singular;

impl fmt::Display for Singular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("singular point")
    }
}

#[derive(Debug)]
enum Node {
    Const(Complex64),
    Number(i64),
    Sum(Vec<Symbol>),
    Product(Symbol, Symbol),
    Neg(Symbol),
    Conj(Symbol),
    Recip { arg: Symbol, sigma: f64 },
    Sqrt { arg: Symbol, sigma: f64 },
    Powf { base: Symbol, exponent: f64, sigma: f64 },
    Sin(Symbol),
    Cos(Symbol),
    Sinc(Symbol),
    At(i64, Symbol),
}

/// An exactly evaluable function of the number operator.
///
/// Cloning is cheap; subtrees are shared.
#[derive(Clone)]
pub struct Symbol(Arc<Node>);

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl Symbol {
    fn node(node: Node) -> Self {
        Symbol(Arc::new(node))
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Self::node(Node::Const(c.into()))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// The shifted number operator `N + offset`.
    pub fn number(offset: i64) -> Self {
        Self::node(Node::Number(offset))
    }

    /// Evaluate `inner` on the basis state `|n + offset>`.
    pub fn at(offset: i64, inner: Symbol) -> Self {
        if offset == 0 {
            return inner;
        }
        // Distributing keeps every factor tied to the state it acts on, so a
        // singular factor is still seen when the outer input lies below the
        // vacuum (as it does for adjoints of raising terms).
        match &*inner.0 {
            Node::Const(_) => inner,
            Node::At(k, s) => Self::at(offset + k, s.clone()),
            Node::Product(a, b) => Self::node(Node::Product(Self::at(offset, a.clone()), Self::at(offset, b.clone()))),
            Node::Sum(ts) => Self::node(Node::Sum(ts.iter().map(|t| Self::at(offset, t.clone())).collect())),
            Node::Neg(s) => Self::node(Node::Neg(Self::at(offset, s.clone()))),
            Node::Conj(s) => Self::node(Node::Conj(Self::at(offset, s.clone()))),
            _ => Self::node(Node::At(offset, inner)),
        }
    }

    pub fn as_constant(&self) -> Option<Complex64> {
        match &*self.0 {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn conj(&self) -> Self {
        match &*self.0 {
            Node::Const(c) => Self::constant(c.conj()),
            Node::Conj(s) => s.clone(),
            _ => Self::node(Node::Conj(self.clone())),
        }
    }

    pub fn recip(&self) -> Self {
        self.recip_with(DEFAULT_SIGMA)
    }

    pub fn recip_with(&self, sigma: f64) -> Self {
        Self::node(Node::Recip { arg: self.clone(), sigma })
    }

    pub fn sqrt(&self) -> Self {
        self.sqrt_with(DEFAULT_SIGMA)
    }

    pub fn sqrt_with(&self, sigma: f64) -> Self {
        Self::node(Node::Sqrt { arg: self.clone(), sigma })
    }

    /// Real power. Negative exponents guard the base like a divisor.
    pub fn powf_with(&self, exponent: f64, sigma: f64) -> Self {
        if exponent == 1.0 {
            return self.clone();
        }
        Self::node(Node::Powf { base: self.clone(), exponent, sigma })
    }

    pub fn powi(&self, k: u32) -> Self {
        match k {
            0 => Self::one(),
            1 => self.clone(),
            _ => {
                let half = self.powi(k / 2);
                let sq = &half * &half;
                if k % 2 == 1 {
                    &sq * self
                } else {
                    sq
                }
            }
        }
    }

    pub fn sin(&self) -> Self {
        Self::node(Node::Sin(self.clone()))
    }

    pub fn cos(&self) -> Self {
        Self::node(Node::Cos(self.clone()))
    }

    /// `sin(x)/x`, finite at the origin.
    pub fn sinc(&self) -> Self {
        Self::node(Node::Sinc(self.clone()))
    }

    /// Evaluate at basis index `n`.
    pub fn eval(&self, n: i64) -> Result<Complex64, Singular> {
        match &*self.0 {
            Node::Const(c) => Ok(*c),
            Node::Number(k) => {
                let m = n + k;
                if m < 0 {
                    Err(Singular)
                } else {
                    Ok(Complex64::new(m as f64, 0.0))
                }
            }
            Node::Sum(terms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in terms {
                    acc += t.eval(n)?;
                }
                Ok(acc)
            }
            Node::Product(a, b) => {
                let x = a.eval_factor(n)?;
                let y = b.eval_factor(n)?;
                match (x, y) {
                    // sqrt(x) sqrt(y) as sqrt(xy) keeps sqrt(n+1)^2 = n+1 exact
                    (Factor::Radicand(x, _), Factor::Radicand(y, _))
                        if x.im == 0.0 && y.im == 0.0 =>
                    {
                        Ok(Complex64::new((x.re.max(0.0) * y.re.max(0.0)).sqrt(), 0.0))
                    }
                    (x, y) => Ok(x.value()? * y.value()?),
                }
            }
            Node::Neg(s) => Ok(-s.eval(n)?),
            Node::Conj(s) => Ok(s.eval(n)?.conj()),
            Node::Recip { arg, sigma } => {
                let x = arg.eval(n)?;
                if x.norm() < *sigma {
                    Err(Singular)
                } else {
                    Ok(x.inv())
                }
            }
            Node::Sqrt { arg, sigma } => guarded_sqrt(arg.eval(n)?, *sigma),
            Node::Powf { base, exponent, sigma } => {
                guarded_powf(base.eval(n)?, *exponent, *sigma)
            }
            Node::Sin(s) => Ok(s.eval(n)?.sin()),
            Node::Cos(s) => Ok(s.eval(n)?.cos()),
            Node::Sinc(s) => Ok(sinc(s.eval(n)?)),
            Node::At(k, s) => {
                let m = n + k;
                if m < 0 {
                    Ok(Complex64::new(0.0, 0.0))
                } else {
                    s.eval(m)
                }
            }
        }
    }

    fn eval_factor(&self, n: i64) -> Result<Factor, Singular> {
        match &*self.0 {
            Node::Sqrt { arg, sigma } => {
                let x = arg.eval(n)?;
                if is_real(x, *sigma) && x.re < -*sigma {
                    return Err(Singular);
                }
                Ok(Factor::Radicand(x, *sigma))
            }
            Node::At(k, s) if n + k >= 0 => s.eval_factor(n + k),
            _ => self.eval(n).map(Factor::Value),
        }
    }

    pub fn is_singular_at(&self, n: i64) -> bool {
        self.eval(n).is_err()
    }
}

enum Factor {
    Value(Complex64),
    Radicand(Complex64, f64),
}

impl Factor {
    fn value(self) -> Result<Complex64, Singular> {
        match self {
            Factor::Value(v) => Ok(v),
            Factor::Radicand(x, sigma) => guarded_sqrt(x, sigma),
        }
    }
}

fn is_real(x: Complex64, sigma: f64) -> bool {
    x.im.abs() <= sigma
}

fn guarded_sqrt(x: Complex64, sigma: f64) -> Result<Complex64, Singular> {
    if is_real(x, sigma) {
        if x.re < -sigma {
            return Err(Singular);
        }
        return Ok(Complex64::new(x.re.max(0.0).sqrt(), 0.0));
    }
    Ok(x.sqrt())
}

fn guarded_powf(x: Complex64, exponent: f64, sigma: f64) -> Result<Complex64, Singular> {
    if exponent < 0.0 && x.norm() < sigma {
        return Err(Singular);
    }
    if is_real(x, sigma) {
        if x.re >= 0.0 {
            return Ok(Complex64::new(x.re.powf(exponent), 0.0));
        }
        if exponent.fract() == 0.0 {
            return Ok(Complex64::new(x.re.powf(exponent), 0.0));
        }
        return Err(Singular);
    }
    Ok(x.powf(exponent))
}

/// `sin(z)/z` with a 7-term Taylor series near zero.
pub fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < SINC_TAYLOR_RADIUS {
        let z2 = z * z;
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for k in 1..7 {
            let denom = ((2 * k) * (2 * k + 1)) as f64;
            term = -term * z2 / denom;
            acc += term;
        }
        acc
    } else {
        z.sin() / z
    }
}

fn sum_terms(s: &Symbol) -> Option<&[Symbol]> {
    match &*s.0 {
        Node::Sum(t) => Some(t),
        _ => None,
    }
}

impl Add for &Symbol {
    type Output = Symbol;
    fn add(self, rhs: &Symbol) -> Symbol {
        if let (Some(a), Some(b)) = (self.as_constant(), rhs.as_constant()) {
            return Symbol::constant(a + b);
        }
        let mut terms = Vec::new();
        for s in [self, rhs] {
            match sum_terms(s) {
                Some(t) => terms.extend(t.iter().cloned()),
                None => terms.push(s.clone()),
            }
        }
        Symbol::node(Node::Sum(terms))
    }
}

impl Sub for &Symbol {
    type Output = Symbol;
    fn sub(self, rhs: &Symbol) -> Symbol {
        self + &(-rhs)
    }
}

impl Mul for &Symbol {
    type Output = Symbol;
    fn mul(self, rhs: &Symbol) -> Symbol {
        match (self.as_constant(), rhs.as_constant()) {
            (Some(a), Some(b)) => Symbol::constant(a * b),
            (Some(a), None) if a == Complex64::new(1.0, 0.0) => rhs.clone(),
            (None, Some(b)) if b == Complex64::new(1.0, 0.0) => self.clone(),
            _ => Symbol::node(Node::Product(self.clone(), rhs.clone())),
        }
    }
}

impl Div for &Symbol {
    type Output = Symbol;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Symbol) -> Symbol {
        self * &rhs.recip()
    }
}

impl Neg for &Symbol {
    type Output = Symbol;
    fn neg(self) -> Symbol {
        match &*self.0 {
            Node::Const(c) => Symbol::constant(-*c),
            Node::Neg(s) => s.clone(),
            _ => Symbol::node(Node::Neg(self.clone())),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Symbol {
            type Output = Symbol;
            fn $m(self, rhs: Symbol) -> Symbol {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Symbol> for Symbol {
            type Output = Symbol;
            fn $m(self, rhs: &Symbol) -> Symbol {
                (&self).$m(rhs)
            }
        }
        impl $tr<f64> for &Symbol {
            type Output = Symbol;
            fn $m(self, rhs: f64) -> Symbol {
                self.$m(&Symbol::constant(rhs))
            }
        }
        impl $tr<f64> for Symbol {
            type Output = Symbol;
            fn $m(self, rhs: f64) -> Symbol {
                (&self).$m(&Symbol::constant(rhs))
            }
        }
        impl $tr<&Symbol> for f64 {
            type Output = Symbol;
            fn $m(self, rhs: &Symbol) -> Symbol {
                Symbol::constant(self).$m(rhs)
            }
        }
        impl $tr<Symbol> for f64 {
            type Output = Symbol;
            fn $m(self, rhs: Symbol) -> Symbol {
                Symbol::constant(self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Symbol {
    type Output = Symbol;
    fn neg(self) -> Symbol {
        -&self
    }
}

impl From<f64> for Symbol {
    fn from(x: f64) -> Self {
        Symbol::constant(x)
    }
}

impl From<Complex64> for Symbol {
    fn from(x: Complex64) -> Self {
        Symbol::constant(x)
    }
}
