//! Scalar activation functions behind a common trait, registered by name.
//!
//! Every activation acts componentwise on vectors and doubles as the limit
//! map of its flow `dx/dt = mu(x) - x` at the compactified time s = 1. New
//! variants plug in by implementing [`Activation`] and adding a registry
//! entry; everything downstream (flows, networks, CLI flags, experiment
//! configs) selects them by descriptor string such as `relu` or
//! `leaky-relu(0.1)`.

use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub trait Activation: Send + Sync + fmt::Debug {
    /// Registry name, e.g. `"leaky-relu"`.
    fn name(&self) -> &'static str;

    /// Full descriptor including parameters, e.g. `"leaky-relu(0.1)"`.
    fn descriptor(&self) -> String {
        self.name().to_string()
    }

    fn value(&self, x: f64) -> f64;

    /// Derivative used by backpropagation. Kink conventions: relu and
    /// leaky-relu take their x <= 0 branch at the kink (0 and alpha).
    fn derivative(&self, x: f64) -> f64;
}

#[derive(Debug, Clone, Copy)]
struct Relu;

impl Activation for Relu {
    fn name(&self) -> &'static str {
        "relu"
    }
    fn value(&self, x: f64) -> f64 {
        x.max(0.0)
    }
    fn derivative(&self, x: f64) -> f64 {
        if x > 0.0 {
            1.0
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct LeakyRelu {
    alpha: f64,
}

impl Activation for LeakyRelu {
    fn name(&self) -> &'static str {
        "leaky-relu"
    }
    fn descriptor(&self) -> String {
        format!("leaky-relu({})", self.alpha)
    }
    fn value(&self, x: f64) -> f64 {
        if x > 0.0 {
            x
        } else {
            self.alpha * x
        }
    }
    fn derivative(&self, x: f64) -> f64 {
        if x > 0.0 {
            1.0
        } else {
            self.alpha
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Elu {
    alpha: f64,
}

impl Activation for Elu {
    fn name(&self) -> &'static str {
        "elu"
    }
    fn descriptor(&self) -> String {
        format!("elu({})", self.alpha)
    }
    fn value(&self, x: f64) -> f64 {
        if x > 0.0 {
            x
        } else {
            self.alpha * (x.exp() - 1.0)
        }
    }
    fn derivative(&self, x: f64) -> f64 {
        if x > 0.0 {
            1.0
        } else {
            self.alpha * x.exp()
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Sigmoid;

impl Activation for Sigmoid {
    fn name(&self) -> &'static str {
        "sigmoid"
    }
    fn value(&self, x: f64) -> f64 {
        1.0 / (1.0 + (-x).exp())
    }
    fn derivative(&self, x: f64) -> f64 {
        let s = self.value(x);
        s * (1.0 - s)
    }
}

#[derive(Debug, Clone, Copy)]
struct TanhAct;

impl Activation for TanhAct {
    fn name(&self) -> &'static str {
        "tanh"
    }
    fn value(&self, x: f64) -> f64 {
        x.tanh()
    }
    fn derivative(&self, x: f64) -> f64 {
        let t = x.tanh();
        1.0 - t * t
    }
}

#[derive(Debug, Clone, Copy)]
struct IdentityAct;

impl Activation for IdentityAct {
    fn name(&self) -> &'static str {
        "identity"
    }
    fn value(&self, x: f64) -> f64 {
        x
    }
    fn derivative(&self, _x: f64) -> f64 {
        1.0
    }
}

type Factory = fn(&[f64]) -> Result<Arc<dyn Activation>>;

struct Entry {
    name: &'static str,
    arity: usize,
    make: Factory,
}

fn expect_args(name: &'static str, arity: usize, args: &[f64]) -> Result<()> {
    if args.len() != arity {
        return Err(Error::InvalidParameter(format!(
            "activation `{name}` takes {arity} parameter(s), got {}",
            args.len()
        )));
    }
    Ok(())
}

static REGISTRY: &[Entry] = &[
    Entry {
        name: "relu",
        arity: 0,
        make: |args| {
            expect_args("relu", 0, args)?;
            Ok(Arc::new(Relu))
        },
    },
    Entry {
        name: "leaky-relu",
        arity: 1,
        make: |args| {
            expect_args("leaky-relu", 1, args)?;
            let alpha = args[0];
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "leaky-relu alpha must lie in (0, 1], got {alpha}"
                )));
            }
            Ok(Arc::new(LeakyRelu { alpha }))
        },
    },
    Entry {
        name: "elu",
        arity: 1,
        make: |args| {
            expect_args("elu", 1, args)?;
            let alpha = args[0];
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "elu alpha must be positive, got {alpha}"
                )));
            }
            Ok(Arc::new(Elu { alpha }))
        },
    },
    Entry {
        name: "sigmoid",
        arity: 0,
        make: |args| {
            expect_args("sigmoid", 0, args)?;
            Ok(Arc::new(Sigmoid))
        },
    },
    Entry {
        name: "tanh",
        arity: 0,
        make: |args| {
            expect_args("tanh", 0, args)?;
            Ok(Arc::new(TanhAct))
        },
    },
    Entry {
        name: "identity",
        arity: 0,
        make: |args| {
            expect_args("identity", 0, args)?;
            Ok(Arc::new(IdentityAct))
        },
    },
];

/// Names of all registered activations.
pub fn registered_activations() -> Vec<&'static str> {
    REGISTRY.iter().map(|e| e.name).collect()
}

/// A registered activation, selected by name and shared cheaply.
///
/// Serializes as its descriptor string, so specs and configs stay
/// human-editable (`"activation": "leaky-relu(0.1)"`).
#[derive(Clone)]
pub struct ActivationKind(Arc<dyn Activation>);

impl ActivationKind {
    /// Look up `descriptor` in the registry: a bare name (`"relu"`) or a
    /// name with parenthesized parameters (`"elu(1)"`).
    pub fn parse(descriptor: &str) -> Result<Self> {
        let descriptor = descriptor.trim();
        let (name, args) = match descriptor.find('(') {
            None => (descriptor, Vec::new()),
            Some(open) => {
                let close = descriptor
                    .rfind(')')
                    .ok_or_else(|| Error::InvalidParameter(format!(
                        "unterminated parameter list in `{descriptor}`"
                    )))?;
                if close != descriptor.len() - 1 || close < open {
                    return Err(Error::InvalidParameter(format!(
                        "malformed activation descriptor `{descriptor}`"
                    )));
                }
                let name = &descriptor[..open];
                let args = descriptor[open + 1..close]
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| {
                        s.trim().parse::<f64>().map_err(|_| {
                            Error::InvalidParameter(format!(
                                "bad activation parameter `{s}` in `{descriptor}`"
                            ))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                (name, args)
            }
        };
        let entry = REGISTRY
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownName { kind: "activation", name: name.to_string() })?;
        if args.is_empty() && entry.arity > 0 {
            return Err(Error::InvalidParameter(format!(
                "activation `{name}` requires {} parameter(s)",
                entry.arity
            )));
        }
        Ok(ActivationKind((entry.make)(&args)?))
    }

    pub fn relu() -> Self {
        Self::parse("relu").unwrap()
    }

    pub fn leaky_relu(alpha: f64) -> Result<Self> {
        Self::parse(&format!("leaky-relu({alpha})"))
    }

    pub fn elu(alpha: f64) -> Result<Self> {
        Self::parse(&format!("elu({alpha})"))
    }

    pub fn sigmoid() -> Self {
        Self::parse("sigmoid").unwrap()
    }

    pub fn tanh() -> Self {
        Self::parse("tanh").unwrap()
    }

    pub fn identity() -> Self {
        Self::parse("identity").unwrap()
    }

    /// Componentwise application.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&v| self.0.value(v)).collect()
    }
}

impl std::ops::Deref for ActivationKind {
    type Target = dyn Activation;

    fn deref(&self) -> &Self::Target {
        &*self.0
    }
}

impl fmt::Debug for ActivationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ActivationKind({})", self.0.descriptor())
    }
}

impl fmt::Display for ActivationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.descriptor())
    }
}

impl PartialEq for ActivationKind {
    fn eq(&self, other: &Self) -> bool {
        self.0.descriptor() == other.0.descriptor()
    }
}

impl Serialize for ActivationKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.descriptor())
    }
}

impl<'de> Deserialize<'de> for ActivationKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        ActivationKind::parse(&s).map_err(D::Error::custom)
    }
}
