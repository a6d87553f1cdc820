use crate::distribution::NaturalParams;
use crate::error::{MvbError, Result};
use crate::glm::{linear_predictor, MvbGlmModel};
use crate::scalar::Scalar;

/// Structure read off natural parameters: active main effects, pairwise
/// edges, and higher-order cliques. Node indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub k: usize,
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub cliques: Vec<Vec<usize>>,
}

pub fn extract_graph_from_natural<T: Scalar>(f: &NaturalParams<T>, tol: T) -> Result<Graph> {
    if tol.is_nan() || tol < T::zero() {
        return Err(MvbError::InvalidParameter(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    let mut graph = Graph {
        k: f.k(),
        nodes: Vec::new(),
        edges: Vec::new(),
        cliques: Vec::new(),
    };
    for (tau, v) in f.entries() {
        if v.abs() <= tol {
            continue;
        }
        let nodes = tau.nodes();
        match nodes.len() {
            1 => graph.nodes.push(nodes[0]),
            2 => graph.edges.push((nodes[0], nodes[1])),
            _ => graph.cliques.push(nodes),
        }
    }
    graph.nodes.sort_unstable();
    graph.edges.sort_unstable();
    graph.cliques.sort();
    Ok(graph)
}

/// Graph of the model's natural parameters at covariate point `x`, or of
/// its intercepts when `x` is `None`.
pub fn extract_graph<T: Scalar>(model: &MvbGlmModel<T>, x: Option<&[T]>, tol: T) -> Result<Graph> {
    let zeros;
    let x = match x {
        Some(x) => x,
        None => {
            zeros = vec![T::zero(); model.p()];
            &zeros
        }
    };
    extract_graph_from_natural(&linear_predictor(model, x)?, tol)
}
