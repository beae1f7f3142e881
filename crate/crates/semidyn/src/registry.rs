//! Built-in example systems.
//!
//! Ten systems in a fixed order: enough to exercise every classification
//! path (expanding interval maps, an irrational rotation, a hyperbolic
//! torus map, three shifts of finite type, a sampled linear flow, and the
//! identity as the all-Unknown control).

use crate::action::{FlowMap, MapFn, SemigroupAction};
use crate::sft::Sft;
use crate::space::MetricSystem;

/// An analyzable system: either a metric action sampled numerically or a
/// shift of finite type handled exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemKind {
    Metric {
        action: SemigroupAction,
        space: MetricSystem,
    },
    Shift { sft: Sft, space: MetricSystem },
}

#[derive(Debug, Clone, PartialEq)]
pub struct System {
    pub name: String,
    pub kind: SystemKind,
}

impl System {
    fn metric(name: &str, action: SemigroupAction, space: MetricSystem) -> System {
        System {
            name: name.to_string(),
            kind: SystemKind::Metric { action, space },
        }
    }

    fn shift(name: &str, sft: Sft) -> System {
        System {
            name: name.to_string(),
            kind: SystemKind::Shift {
                sft,
                space: MetricSystem::symbol_seq(name, 2, 32),
            },
        }
    }
}

/// Fractional part of the golden ratio, the default rotation angle.
pub fn golden_alpha() -> f64 {
    (5.0f64.sqrt() - 1.0) / 2.0
}

/// Default flow sampling step.
pub const DEFAULT_DT: f64 = 0.01;

pub fn tent() -> System {
    System::metric(
        "tent",
        SemigroupAction::cascade(MapFn::Tent),
        MetricSystem::interval("tent", 0.0, 1.0),
    )
}

pub fn doubling() -> System {
    System::metric(
        "doubling",
        SemigroupAction::cascade(MapFn::Doubling),
        MetricSystem::circle("doubling"),
    )
}

pub fn logistic4() -> System {
    System::metric(
        "logistic4",
        SemigroupAction::cascade(MapFn::Logistic4),
        MetricSystem::interval("logistic4", 0.0, 1.0),
    )
}

pub fn rotation(alpha: f64) -> System {
    System::metric(
        "rotation",
        SemigroupAction::cascade(MapFn::Rotation(alpha)),
        MetricSystem::circle("rotation"),
    )
}

pub fn cat_map() -> System {
    System::metric(
        "cat_map",
        SemigroupAction::cascade(MapFn::CatMap),
        MetricSystem::torus("cat_map"),
    )
}

pub fn full_shift_2() -> System {
    System::shift("full_shift_2", Sft::full_shift(2))
}

pub fn golden_mean_shift() -> System {
    System::shift("golden_mean_shift", Sft::golden_mean())
}

pub fn two_cycle_shift() -> System {
    System::shift("two_cycle_shift", Sft::two_cycle())
}

pub fn torus_linear_flow(omega1: f64, omega2: f64, dt: f64) -> System {
    System::metric(
        "torus_linear_flow",
        SemigroupAction::sampled_flow(FlowMap::TorusLinear { omega1, omega2 }, dt),
        MetricSystem::torus("torus_linear_flow"),
    )
}

pub fn identity() -> System {
    System::metric(
        "identity",
        SemigroupAction::cascade(MapFn::Identity),
        MetricSystem::interval("identity", 0.0, 1.0),
    )
}

/// One registry row: the builtin id and what it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuiltinDescriptor {
    pub name: &'static str,
    pub summary: &'static str,
}

/// The ten built-in descriptors, in registry order.
pub fn registry_list() -> Vec<BuiltinDescriptor> {
    vec![
        BuiltinDescriptor {
            name: "tent",
            summary: "tent map x -> 1 - |1 - 2x| on [0, 1]",
        },
        BuiltinDescriptor {
            name: "doubling",
            summary: "doubling map x -> 2x on the circle",
        },
        BuiltinDescriptor {
            name: "logistic4",
            summary: "logistic map x -> 4x(1 - x) on [0, 1]",
        },
        BuiltinDescriptor {
            name: "rotation",
            summary: "circle rotation by alpha (default: golden fraction)",
        },
        BuiltinDescriptor {
            name: "cat_map",
            summary: "hyperbolic torus map (x, y) -> (2x + y, x + y)",
        },
        BuiltinDescriptor {
            name: "full_shift_2",
            summary: "full shift on two symbols",
        },
        BuiltinDescriptor {
            name: "golden_mean_shift",
            summary: "shift of finite type forbidding the word 11",
        },
        BuiltinDescriptor {
            name: "two_cycle_shift",
            summary: "two states exchanged by every admissible step",
        },
        BuiltinDescriptor {
            name: "torus_linear_flow",
            summary: "sampled linear torus flow with speeds (omega1, omega2), default (1, sqrt 2)",
        },
        BuiltinDescriptor {
            name: "identity",
            summary: "identity map on [0, 1], the all-Unknown control",
        },
    ]
}

/// Construct a builtin at its default parameters.
pub fn builtin(name: &str) -> Option<System> {
    match name {
        "tent" => Some(tent()),
        "doubling" => Some(doubling()),
        "logistic4" => Some(logistic4()),
        "rotation" => Some(rotation(golden_alpha())),
        "cat_map" => Some(cat_map()),
        "full_shift_2" => Some(full_shift_2()),
        "golden_mean_shift" => Some(golden_mean_shift()),
        "two_cycle_shift" => Some(two_cycle_shift()),
        "torus_linear_flow" => Some(torus_linear_flow(1.0, 2.0f64.sqrt(), DEFAULT_DT)),
        "identity" => Some(identity()),
        _ => None,
    }
}

/// All ten builtins at default parameters, in registry order.
pub fn default_registry() -> Vec<System> {
    registry_list()
        .iter()
        .map(|d| builtin(d.name).expect("registry names resolve"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_the_ten_fixed_entries() {
        let list = registry_list();
        assert_eq!(list.len(), 10);
        assert_eq!(list[0].name, "tent");
        assert!(list.iter().any(|d| d.name == "doubling"));
        assert!(list.iter().any(|d| d.name == "torus_linear_flow"));
        assert_eq!(list[9].name, "identity");
    }

    #[test]
    fn every_descriptor_resolves() {
        for d in registry_list() {
            let sys = builtin(d.name).expect("descriptor resolves");
            assert_eq!(sys.name, d.name);
        }
        assert!(builtin("unknown_map").is_none());
    }

    #[test]
    fn shift_entries_carry_their_matrices() {
        match &golden_mean_shift().kind {
            SystemKind::Shift { sft, .. } => {
                assert_eq!(sft.states(), 2);
                assert!(sft.edge(0, 1) && !sft.edge(1, 1));
            }
            _ => panic!("golden mean is a shift"),
        }
    }

    #[test]
    fn flow_entry_is_a_sampled_flow() {
        use crate::action::ActionKind;
        match &torus_linear_flow(1.0, 2.0f64.sqrt(), DEFAULT_DT).kind {
            SystemKind::Metric { action, .. } => {
                assert!(matches!(action.kind, ActionKind::SampledFlow { .. }));
                assert!(!action.flags.f_semigroup);
                assert!(action.flags.c_semigroup);
            }
            _ => panic!("flow is metric"),
        }
    }
}
