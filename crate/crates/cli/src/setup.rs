// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use rankstair_core::codes::{CodePair, LinearCode};
use rankstair_core::coset::NestedScheme;
use rankstair_core::staircase::{StaircasePlan, StaircaseScheme};
use rankstair_core::FieldTower;

use crate::config::{ConfigError, ExperimentConfig, SchemeKind};

#[derive(Clone, Debug)]
pub enum Scheme {
    Nested(NestedScheme),
    Staircase(Box<StaircaseScheme>),
}

/// A validated configuration together with its field and scheme.
#[derive(Clone, Debug)]
pub struct Setup {
    pub config: ExperimentConfig,
    pub tower: Arc<FieldTower>,
    pub scheme: Scheme,
}

impl Setup {
    pub fn build(config: ExperimentConfig) -> Result<Self, ConfigError> {
        let c = &config;
        let mut errors = Vec::new();
        let tower = match FieldTower::new(c.p, c.s, c.m, None) {
            Ok(t) => Arc::new(t),
            Err(e) => return Err(ConfigError(vec![format!("field: {e}")])),
        };
        let scheme = match c.scheme {
            SchemeKind::Nested => LinearCode::gabidulin(tower.clone(), c.n, c.k1)
                .and_then(|code| CodePair::nested(code, c.k2))
                .map(|pair| Scheme::Nested(NestedScheme::new(pair, c.seed))),
            SchemeKind::StaircaseGabidulin => StaircasePlan::gabidulin(c.n, c.m, c.k1, c.k2, c.t0, &c.d_set)
                .and_then(|plan| StaircaseScheme::new(plan, tower.clone(), c.seed))
                .map(|s| Scheme::Staircase(Box::new(s))),
            SchemeKind::StaircaseProduct => StaircasePlan::product(c.l, c.m, c.k1, c.k2, c.t0, &c.d_set)
                .and_then(|plan| StaircaseScheme::new(plan, tower.clone(), c.seed))
                .map(|s| Scheme::Staircase(Box::new(s))),
        };
        let scheme = match scheme {
            Ok(s) => Some(s),
            Err(e) => {
                errors.push(format!("scheme: {e}"));
                None
            }
        };
        if let Some(Scheme::Staircase(st)) = &scheme {
            let plan = st.plan();
            if c.rho > plan.rho0 {
                errors.push(format!("rho = {} exceeds the plan's erasure tolerance n − min D = {}", c.rho, plan.rho0));
            }
        }
        let rows = match &scheme {
            Some(Scheme::Staircase(st)) => st.plan().alpha,
            _ => 1,
        };
        let received = if c.scheme.is_staircase() || c.crisscross { c.n } else { c.big_n };
        if c.crisscross {
            if c.t > rows * c.m + c.n {
                errors.push(format!("crisscross weight t = {} exceeds rows + columns", c.t));
            }
        } else if c.t > (rows * c.m).min(received) {
            errors.push(format!("error rank t = {} exceeds min(rows·m, N) = {}", c.t, (rows * c.m).min(received)));
        }
        match (scheme, errors.is_empty()) {
            (Some(scheme), true) => Ok(Setup { config, tower, scheme }),
            _ => Err(ConfigError(errors)),
        }
    }

    pub fn staircase(&self) -> Option<&StaircaseScheme> {
        match &self.scheme {
            Scheme::Staircase(s) => Some(s),
            Scheme::Nested(_) => None,
        }
    }

    pub fn ell(&self) -> usize {
        match &self.scheme {
            Scheme::Staircase(s) => s.plan().ell,
            Scheme::Nested(s) => s.pair().ell(),
        }
    }

    /// Subpacketization α (1 for the nested scheme).
    pub fn alpha(&self) -> usize {
        self.staircase().map_or(1, |s| s.plan().alpha)
    }

    /// The pair whose relative distances govern security.
    pub fn security_pair(&self) -> CodePair {
        match &self.scheme {
            Scheme::Staircase(s) => s.security_pair(),
            Scheme::Nested(s) => s.pair().clone(),
        }
    }
}
