use crate::error::OracleError;
use crate::graph::Graph;
use crate::hom::{check_homomorphism, Homomorphism};

/// A recoloring question: can `alpha` be turned into `beta` in Col(g, h)?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub g: Graph,
    pub h: Graph,
    pub alpha: Homomorphism,
    pub beta: Homomorphism,
}

impl Instance {
    /// Checks both endpoints and requires `g` to be connected and non-empty.
    pub fn new(
        g: Graph,
        h: Graph,
        alpha: Homomorphism,
        beta: Homomorphism,
    ) -> Result<Self, OracleError> {
        let inst = Instance { g, h, alpha, beta };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if self.g.is_empty() {
            return Err(OracleError::InvalidInstance(format!(
                "graph `{}` is empty",
                self.g.name()
            )));
        }
        if !self.g.is_connected() {
            return Err(OracleError::InvalidInstance(format!(
                "graph `{}` is disconnected",
                self.g.name()
            )));
        }
        if self.h.is_empty() {
            return Err(OracleError::InvalidInstance(format!(
                "graph `{}` is empty",
                self.h.name()
            )));
        }
        check_homomorphism(&self.g, &self.h, self.alpha.map())
            .map_err(OracleError::InvalidEndpoint)?;
        check_homomorphism(&self.g, &self.h, self.beta.map())
            .map_err(OracleError::InvalidEndpoint)?;
        Ok(())
    }
}
