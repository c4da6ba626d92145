//! Reductions between recoloring problems.

pub mod closure;
pub mod incidence;
pub mod product;

pub use closure::{expand_move_reflexive, reflexive_closure_reduction, transfer_to_closure};
pub use incidence::{
    build_clique_incidence, build_edge_incidence, expand_move, lift_hom, restrict_hom,
    retract_false_cliques, retract_hom, transfer_path_backward, transfer_path_forward,
    CliqueIncidence, EdgeIncidence,
};
pub use product::{
    bipartite_irreflexive_to_reflexive, lift_to_product, product_lift, product_project,
    product_sides, product_with_k2, reflexive_path_to_original, unloop_sequence,
};

use std::fmt::Write as _;

use crate::error::ReductionError;
use crate::instance::Instance;

/// The reductions exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    CliqueIncidence,
    ProductK2,
    ReflexiveClosure,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::CliqueIncidence => "clique-incidence",
            Method::ProductK2 => "product-k2",
            Method::ReflexiveClosure => "reflexive-closure",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "clique-incidence" => Ok(Method::CliqueIncidence),
            "product-k2" => Ok(Method::ProductK2),
            "reflexive-closure" => Ok(Method::ReflexiveClosure),
            _ => Err(format!("unknown method `{}`", s)),
        }
    }
}

/// A reduced instance with a text description of where each new vertex
/// comes from.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub instance: Instance,
    pub mapping: String,
}

pub fn reduce(instance: &Instance, method: Method) -> Result<Reduced, ReductionError> {
    let mut m = String::new();
    writeln!(m, "method {}", method.name()).unwrap();
    let reduced = match method {
        Method::CliqueIncidence => {
            let ei = build_edge_incidence(&instance.g)?;
            let ci = build_clique_incidence(&instance.h, true)?;
            let alpha = lift_hom(&instance.alpha, &ei, &ci)?;
            let beta = lift_hom(&instance.beta, &ei, &ci)?;
            writeln!(m, "source {}", ei.incidence.name()).unwrap();
            for v in 0..ei.source_n() {
                writeln!(m, "  {} vertex {}", v, v).unwrap();
            }
            for (i, (u, v)) in ei.edges().iter().enumerate() {
                writeln!(m, "  {} edge {} {}", ei.source_n() + i, u, v).unwrap();
            }
            writeln!(m, "target {}", ci.incidence.name()).unwrap();
            for v in 0..ci.host_n() {
                writeln!(m, "  {} vertex {}", v, v).unwrap();
            }
            for k in ci.host_n()..ci.incidence.n() {
                let kind = if ci.is_false_clique(k) {
                    "false-clique"
                } else {
                    "clique"
                };
                let members: Vec<String> = ci
                    .clique_members(k)
                    .unwrap()
                    .iter()
                    .map(|x| x.to_string())
                    .collect();
                writeln!(m, "  {} {} {}", k, kind, members.join(" ")).unwrap();
            }
            Instance {
                g: ei.incidence,
                h: ci.incidence,
                alpha,
                beta,
            }
        }
        Method::ProductK2 => {
            let r = bipartite_irreflexive_to_reflexive(instance)?;
            writeln!(m, "source {} unchanged", r.g.name()).unwrap();
            writeln!(m, "target {}", r.h.name()).unwrap();
            for k in r.h.vertices() {
                writeln!(m, "  {} pair {} {}", k, k / 2, k % 2).unwrap();
            }
            r
        }
        Method::ReflexiveClosure => {
            let r = reflexive_closure_reduction(instance)?;
            writeln!(m, "source {} loops added to every vertex", r.g.name()).unwrap();
            writeln!(m, "target {} unchanged", r.h.name()).unwrap();
            r
        }
    };
    Ok(Reduced {
        instance: reduced,
        mapping: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::hom::Homomorphism;

    #[test]
    fn clique_incidence_reduction_of_h7() {
        let g = complete(2).reflexive_closure();
        let inst = Instance::new(
            g,
            h7(),
            Homomorphism::from_map_unchecked(vec![1, 2]),
            Homomorphism::from_map_unchecked(vec![5, 6]),
        )
        .unwrap();
        let r = reduce(&inst, Method::CliqueIncidence).unwrap();
        r.instance.validate().unwrap();
        assert_eq!(r.instance.h.n(), 19);
        assert!(r.mapping.contains("  7 clique 0 1 2"));
        assert!(r.mapping.contains("  18 false-clique 6"));
        assert!(r.mapping.contains("  2 edge 0 1"));
    }

    #[test]
    fn method_names_round_trip() {
        for m in [
            Method::CliqueIncidence,
            Method::ProductK2,
            Method::ReflexiveClosure,
        ] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("other".parse::<Method>().is_err());
    }
}
