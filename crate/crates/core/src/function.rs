use std::fmt::Debug;
use std::sync::Arc;

use crate::error::Result;
use crate::jet::Jet;

/// A scalar function of one real variable that can report its third-order
/// jet at any point of its domain.
pub trait ScalarFunction: Send + Sync + Debug {
    fn jet(&self, t: f64) -> Result<Jet>;

    /// Human-readable form used in reports and spec echoes.
    fn describe(&self) -> String;
}

pub type SharedFn = Arc<dyn ScalarFunction>;

/// Evaluates the jet of `f` at `t`.
pub fn jet_eval(f: &dyn ScalarFunction, t: f64) -> Result<Jet> {
    f.jet(t)
}

impl<F: ScalarFunction + ?Sized> ScalarFunction for Arc<F> {
    fn jet(&self, t: f64) -> Result<Jet> {
        (**self).jet(t)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// A constant function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl ScalarFunction for Constant {
    fn jet(&self, _t: f64) -> Result<Jet> {
        Ok(Jet::constant(self.0))
    }

    fn describe(&self) -> String {
        format!("{:?}", self.0)
    }
}
