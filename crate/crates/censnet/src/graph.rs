//! Graph data model, line-graph construction, normalization bundles,
//! block-diagonal batching, and subgraph induction.
//!
//! Graphs are simple and undirected. Edges are canonicalized to `u < v` and
//! kept in lexicographic order so the incidence matrix, edge adjacency and
//! edge feature rows stay aligned across runs and file formats. Citation
//! direction survives only as a per-edge flag consumed by feature derivation.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{DenseMatrix, SparseMatrix};

/// Sentinel for an unlabeled node.
pub const UNLABELED: i64 = -1;

/// An undirected simple graph with node and edge features.
#[derive(Debug, Clone)]
pub struct Graph<S: Scalar = f64> {
    num_nodes: usize,
    /// Canonicalized `u < v`, sorted lexicographically.
    edges: Vec<(usize, usize)>,
    /// Node features, `N_v x d_v`.
    pub x: DenseMatrix<S>,
    /// Edge features, `N_e x d_e`, rows aligned with `edges`.
    pub z: DenseMatrix<S>,
    /// Per-node class ids, `UNLABELED` where missing.
    pub node_labels: Option<Vec<i64>>,
    /// Graph-level targets with a missing-mask, one slot per task.
    pub targets: Option<Vec<Option<S>>>,
    /// Per-edge direction flags for derived features:
    /// `true` means the canonical `u` points at `v`.
    pub directions: Option<Vec<bool>>,
}

impl<S: Scalar> Graph<S> {
    /// Validate and canonicalize raw parts into a graph.
    ///
    /// Edge features and direction flags are permuted along with the edges
    /// when they are brought into lexicographic order.
    pub fn new(
        num_nodes: usize,
        edges: Vec<(usize, usize)>,
        x: DenseMatrix<S>,
        z: DenseMatrix<S>,
    ) -> Result<Self> {
        Self::with_metadata(num_nodes, edges, x, z, None, None, None)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_metadata(
        num_nodes: usize,
        edges: Vec<(usize, usize)>,
        x: DenseMatrix<S>,
        z: DenseMatrix<S>,
        node_labels: Option<Vec<i64>>,
        targets: Option<Vec<Option<S>>>,
        directions: Option<Vec<bool>>,
    ) -> Result<Self> {
        if x.rows() != num_nodes {
            return Err(Error::Invalid(format!(
                "node feature matrix has {} rows for {} nodes",
                x.rows(),
                num_nodes
            )));
        }
        if z.rows() != edges.len() {
            return Err(Error::Invalid(format!(
                "edge feature matrix has {} rows for {} edges",
                z.rows(),
                edges.len()
            )));
        }
        if let Some(labels) = &node_labels {
            if labels.len() != num_nodes {
                return Err(Error::Invalid("label vector length != node count".into()));
            }
            if labels.iter().any(|&l| l < UNLABELED) {
                return Err(Error::Invalid("node label below -1".into()));
            }
        }
        if let Some(dirs) = &directions {
            if dirs.len() != edges.len() {
                return Err(Error::Invalid("direction flags length != edge count".into()));
            }
        }

        // Canonicalize u < v, flipping the direction flag when endpoints swap.
        let mut order: Vec<usize> = (0..edges.len()).collect();
        let mut canon: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        let mut dirs = directions;
        for (idx, &(u, v)) in edges.iter().enumerate() {
            if u >= num_nodes || v >= num_nodes {
                return Err(Error::Invalid(format!("edge {idx} ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::Invalid(format!("edge {idx} is a self-loop on {u}")));
            }
            if u < v {
                canon.push((u, v));
            } else {
                canon.push((v, u));
                if let Some(d) = dirs.as_mut() {
                    d[idx] = !d[idx];
                }
            }
        }
        order.sort_by_key(|&i| canon[i]);
        for w in order.windows(2) {
            if canon[w[0]] == canon[w[1]] {
                return Err(Error::Invalid(format!(
                    "duplicate edge ({},{}) at records {} and {}",
                    canon[w[0]].0, canon[w[0]].1, w[0], w[1]
                )));
            }
        }
        let edges: Vec<(usize, usize)> = order.iter().map(|&i| canon[i]).collect();
        let z = permute_rows(&z, &order);
        let dirs = dirs.map(|d| order.iter().map(|&i| d[i]).collect());

        Ok(Graph {
            num_nodes,
            edges,
            x,
            z,
            node_labels,
            targets,
            directions: dirs,
        })
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn node_feature_width(&self) -> usize {
        self.x.cols()
    }

    pub fn edge_feature_width(&self) -> usize {
        self.z.cols()
    }

    /// Number of distinct classes among labeled nodes, as `max + 1`.
    pub fn num_classes(&self) -> usize {
        self.node_labels
            .as_ref()
            .map(|ls| ls.iter().copied().filter(|&l| l >= 0).max().map_or(0, |m| m as usize + 1))
            .unwrap_or(0)
    }

    /// Incidence matrix `T`: `T(i, m) = 1` iff node `i` is an endpoint of
    /// edge `m`. Column order equals edge order.
    pub fn build_incidence(&self) -> SparseMatrix<S> {
        let mut triplets = Vec::with_capacity(2 * self.edges.len());
        for (m, &(u, v)) in self.edges.iter().enumerate() {
            triplets.push((u, m, S::one()));
            triplets.push((v, m, S::one()));
        }
        SparseMatrix::from_triplets(self.num_nodes, self.edges.len(), triplets)
            .expect("canonical edges produce unique incidence entries")
    }

    /// Node adjacency matrix `A_v` (binary, zero diagonal).
    pub fn build_adjacency(&self) -> SparseMatrix<S> {
        let mut triplets = Vec::with_capacity(2 * self.edges.len());
        for &(u, v) in &self.edges {
            triplets.push((u, v, S::one()));
            triplets.push((v, u, S::one()));
        }
        SparseMatrix::from_triplets(self.num_nodes, self.num_nodes, triplets)
            .expect("simple graph has unique adjacency entries")
    }

    /// Edge adjacency matrix `A_e`: `A_e(m, n) = 1` iff edges `m`, `n`
    /// share an endpoint. This is the adjacency matrix of the line graph.
    pub fn build_line_graph(&self) -> SparseMatrix<S> {
        let n_e = self.edges.len();
        // Bucket edges per node, then pair up within each bucket.
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.num_nodes];
        for (m, &(u, v)) in self.edges.iter().enumerate() {
            incident[u].push(m);
            incident[v].push(m);
        }
        let mut triplets = Vec::new();
        for bucket in &incident {
            for (i, &m) in bucket.iter().enumerate() {
                for &n in &bucket[i + 1..] {
                    triplets.push((m, n, S::one()));
                    triplets.push((n, m, S::one()));
                }
            }
        }
        // Two simple-graph edges share at most one node, so no duplicates.
        SparseMatrix::from_triplets(n_e, n_e, triplets)
            .expect("simple graph edges share at most one endpoint")
    }

    /// Incident edge ids per node, in edge order.
    pub fn incident_edges(&self) -> Vec<Vec<usize>> {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.num_nodes];
        for (m, &(u, v)) in self.edges.iter().enumerate() {
            incident[u].push(m);
            incident[v].push(m);
        }
        incident
    }

    /// All precomputed constants the layers consume.
    pub fn build_bundle(&self) -> Result<LineGraphBundle<S>> {
        let t = self.build_incidence();
        let a_v = self.build_adjacency();
        let a_e = self.build_line_graph();
        let norm_av = a_v.sym_normalize(true)?;
        let norm_ae = a_e.sym_normalize(true)?;
        #[cfg(debug_assertions)]
        {
            // A_e = T^T T - 2I must hold on every simple graph.
            let tt = t.to_dense().matmul_at_b(&t.to_dense()).unwrap();
            let mut expect = a_e.to_dense();
            for m in 0..self.edges.len() {
                *expect.at_mut(m, m) += S::from_f64_lossy(2.0);
            }
            debug_assert!(
                tt.max_abs_diff(&expect) == S::zero(),
                "line graph does not satisfy T^T T - 2I"
            );
        }
        Ok(LineGraphBundle {
            t: Arc::new(t),
            a_v: Arc::new(a_v),
            a_e: Arc::new(a_e),
            norm_av: Arc::new(norm_av),
            norm_ae: Arc::new(norm_ae),
        })
    }

    /// Subgraph induced by `node_subset`, plus the old-to-new node map and
    /// the original indices of the surviving edges.
    ///
    /// Keeps exactly the edges with both endpoints inside the subset;
    /// features, labels, and flags are re-indexed along.
    pub fn induced_subgraph(&self, node_subset: &[usize]) -> Result<(Graph<S>, SubgraphMap)> {
        let mut node_map: Vec<Option<usize>> = vec![None; self.num_nodes];
        let mut kept_nodes: Vec<usize> = Vec::new();
        for &n in node_subset {
            if n >= self.num_nodes {
                return Err(Error::Invalid(format!("node {n} out of range")));
            }
            if node_map[n].is_none() {
                node_map[n] = Some(0); // placeholder, re-numbered below
                kept_nodes.push(n);
            }
        }
        // Monotone relabeling keeps lexicographic edge order intact.
        kept_nodes.sort_unstable();
        for (new, &old) in kept_nodes.iter().enumerate() {
            node_map[old] = Some(new);
        }

        let mut edges = Vec::new();
        let mut kept_edges = Vec::new();
        for (m, &(u, v)) in self.edges.iter().enumerate() {
            if let (Some(nu), Some(nv)) = (node_map[u], node_map[v]) {
                edges.push((nu, nv));
                kept_edges.push(m);
            }
        }

        let x = select_rows(&self.x, &kept_nodes);
        let z = select_rows(&self.z, &kept_edges);
        let node_labels = self
            .node_labels
            .as_ref()
            .map(|ls| kept_nodes.iter().map(|&n| ls[n]).collect());
        let directions = self
            .directions
            .as_ref()
            .map(|ds| kept_edges.iter().map(|&m| ds[m]).collect());

        let graph = Graph::with_metadata(
            kept_nodes.len(),
            edges,
            x,
            z,
            node_labels,
            self.targets.clone(),
            directions,
        )?;
        Ok((
            graph,
            SubgraphMap {
                node_map,
                kept_nodes,
                kept_edges,
            },
        ))
    }

    /// Relabel nodes by a permutation: new id of node `i` is `perm[i]`.
    ///
    /// Feature rows move with their nodes; edges re-canonicalize and re-sort,
    /// carrying edge features and flags along.
    pub fn permute_nodes(&self, perm: &[usize]) -> Result<Graph<S>> {
        if perm.len() != self.num_nodes {
            return Err(Error::Invalid("permutation length != node count".into()));
        }
        let mut seen = vec![false; self.num_nodes];
        for &p in perm {
            if p >= self.num_nodes || seen[p] {
                return Err(Error::Invalid("not a permutation".into()));
            }
            seen[p] = true;
        }
        let mut inv = vec![0usize; self.num_nodes];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let x = select_rows(&self.x, &inv);
        let edges: Vec<(usize, usize)> =
            self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        let node_labels = self
            .node_labels
            .as_ref()
            .map(|ls| inv.iter().map(|&old| ls[old]).collect());
        Graph::with_metadata(
            self.num_nodes,
            edges,
            x,
            self.z.clone(),
            node_labels,
            self.targets.clone(),
            self.directions.clone(),
        )
    }
}

/// Index maps returned by [`Graph::induced_subgraph`].
#[derive(Debug, Clone)]
pub struct SubgraphMap {
    /// Old node id -> new node id, `None` if dropped.
    pub node_map: Vec<Option<usize>>,
    /// New node id -> old node id.
    pub kept_nodes: Vec<usize>,
    /// New edge id -> old edge id.
    pub kept_edges: Vec<usize>,
}

/// The precomputed constants every layer consumes: the incidence matrix,
/// both adjacencies, and both normalized propagation matrices.
#[derive(Debug, Clone)]
pub struct LineGraphBundle<S: Scalar = f64> {
    pub t: Arc<SparseMatrix<S>>,
    pub a_v: Arc<SparseMatrix<S>>,
    pub a_e: Arc<SparseMatrix<S>>,
    pub norm_av: Arc<SparseMatrix<S>>,
    pub norm_ae: Arc<SparseMatrix<S>>,
}

/// A batch of graphs merged into one block-diagonal graph.
#[derive(Debug, Clone)]
pub struct GraphBatch<S: Scalar = f64> {
    pub graph: Graph<S>,
    /// Source graph id for every merged node.
    pub segment_ids: Vec<usize>,
    pub num_graphs: usize,
    /// Per-graph targets, `q x k`, zero where missing.
    pub targets: DenseMatrix<S>,
    /// True where a target is observed.
    pub target_mask: Vec<bool>,
}

/// Merge graphs into one block-diagonal graph with segment ids.
///
/// Node and edge indices are offset per graph, so the merged bundle equals
/// the block-diagonal composition of the per-graph bundles.
pub fn block_diag_batch<S: Scalar>(graphs: &[Graph<S>]) -> Result<GraphBatch<S>> {
    if graphs.is_empty() {
        return Err(Error::Contract("empty batch".into()));
    }
    let d_v = graphs[0].node_feature_width();
    let d_e = graphs[0].edge_feature_width();
    let k = graphs[0].targets.as_ref().map_or(0, |t| t.len());
    let mut edges = Vec::new();
    let mut segment_ids = Vec::new();
    let mut x = DenseMatrix::zeros(0, d_v);
    let mut z = DenseMatrix::zeros(0, d_e);
    let mut labels: Vec<i64> = Vec::new();
    let mut any_labels = false;
    let mut targets = DenseMatrix::zeros(graphs.len(), k);
    let mut target_mask = vec![false; graphs.len() * k];
    let mut offset = 0usize;
    for (gid, g) in graphs.iter().enumerate() {
        if g.node_feature_width() != d_v || g.edge_feature_width() != d_e {
            return Err(Error::Invalid(format!(
                "graph {gid} feature widths ({}, {}) differ from ({d_v}, {d_e})",
                g.node_feature_width(),
                g.edge_feature_width()
            )));
        }
        if g.targets.as_ref().map_or(0, |t| t.len()) != k {
            return Err(Error::Invalid(format!("graph {gid} target width differs")));
        }
        for &(u, v) in g.edges() {
            edges.push((u + offset, v + offset));
        }
        segment_ids.extend(std::iter::repeat(gid).take(g.num_nodes()));
        x = x.concat_rows(&g.x)?;
        z = z.concat_rows(&g.z)?;
        match &g.node_labels {
            Some(ls) => {
                labels.extend_from_slice(ls);
                any_labels = true;
            }
            None => labels.extend(std::iter::repeat(UNLABELED).take(g.num_nodes())),
        }
        if let Some(ts) = &g.targets {
            for (j, t) in ts.iter().enumerate() {
                if let Some(v) = t {
                    *targets.at_mut(gid, j) = *v;
                    target_mask[gid * k + j] = true;
                }
            }
        }
        offset += g.num_nodes();
    }
    let graph = Graph::with_metadata(
        offset,
        edges,
        x,
        z,
        any_labels.then_some(labels),
        None,
        None,
    )?;
    Ok(GraphBatch {
        graph,
        segment_ids,
        num_graphs: graphs.len(),
        targets,
        target_mask,
    })
}

fn permute_rows<S: Scalar>(m: &DenseMatrix<S>, order: &[usize]) -> DenseMatrix<S> {
    select_rows(m, order)
}

fn select_rows<S: Scalar>(m: &DenseMatrix<S>, rows: &[usize]) -> DenseMatrix<S> {
    let mut out = DenseMatrix::zeros(rows.len(), m.cols());
    for (new, &old) in rows.iter().enumerate() {
        out.row_mut(new).copy_from_slice(m.row(old));
    }
    out
}

/// Map from a sparse pattern to gate inputs: for every stored entry, the
/// list of input indices whose values sum to the gate value there.
///
/// For the node-layer gate on the pattern of `norm_Av`, inputs are edges:
/// an off-diagonal `(i, j)` maps to the unique edge `{i, j}` and a diagonal
/// `(i, i)` maps to all edges incident to `i`. For the edge-layer gate on
/// `norm_Ae`, inputs are nodes: an off-diagonal `(m, n)` maps to the shared
/// endpoint of edges `m`, `n` and a diagonal `(m, m)` to both endpoints of
/// `m`. Built directly from the incidence matrix.
#[derive(Debug, Clone)]
pub struct GateMap {
    /// Per stored pattern entry, offsets into `indices`.
    pub offsets: Vec<usize>,
    /// Flattened gate input indices.
    pub indices: Vec<usize>,
    /// True where the pattern entry sits on the diagonal.
    pub is_diag: Vec<bool>,
    /// Number of gate inputs (edges or nodes).
    pub input_len: usize,
}

impl GateMap {
    /// Gate map realizing `T diag(v) T^T` restricted to `pattern`.
    pub fn edge_gate<S: Scalar>(
        t: &SparseMatrix<S>,
        pattern: &SparseMatrix<S>,
    ) -> Result<GateMap> {
        let (endpoints, incident) = endpoints_from_incidence(t)?;
        let n_v = t.rows();
        if pattern.shape() != (n_v, n_v) {
            return Err(Error::shape(
                "edge_gate",
                format!("pattern {:?} for {n_v} nodes", pattern.shape()),
            ));
        }
        let mut edge_of: HashMap<(usize, usize), usize> = HashMap::new();
        for (m, &(u, v)) in endpoints.iter().enumerate() {
            edge_of.insert((u, v), m);
        }
        let mut offsets = Vec::with_capacity(pattern.nnz() + 1);
        let mut indices = Vec::new();
        let mut is_diag = Vec::with_capacity(pattern.nnz());
        offsets.push(0);
        let mut diag_seen = vec![false; n_v];
        for (i, j, _) in pattern.entries() {
            if i == j {
                indices.extend_from_slice(&incident[i]);
                diag_seen[i] = true;
                is_diag.push(true);
            } else {
                let key = (i.min(j), i.max(j));
                let m = edge_of.get(&key).ok_or_else(|| {
                    Error::Invalid(format!("pattern entry ({i},{j}) has no corresponding edge"))
                })?;
                indices.push(*m);
                is_diag.push(false);
            }
            offsets.push(indices.len());
        }
        if diag_seen.iter().any(|&d| !d) {
            return Err(Error::Contract(
                "gate pattern must store every self-loop diagonal".into(),
            ));
        }
        Ok(GateMap {
            offsets,
            indices,
            is_diag,
            input_len: endpoints.len(),
        })
    }

    /// Gate map realizing `T^T diag(w) T` restricted to `pattern`.
    pub fn node_gate<S: Scalar>(
        t: &SparseMatrix<S>,
        pattern: &SparseMatrix<S>,
    ) -> Result<GateMap> {
        let (endpoints, _) = endpoints_from_incidence(t)?;
        let n_e = t.cols();
        if pattern.shape() != (n_e, n_e) {
            return Err(Error::shape(
                "node_gate",
                format!("pattern {:?} for {n_e} edges", pattern.shape()),
            ));
        }
        let mut offsets = Vec::with_capacity(pattern.nnz() + 1);
        let mut indices = Vec::new();
        let mut is_diag = Vec::with_capacity(pattern.nnz());
        offsets.push(0);
        let mut diag_seen = vec![false; n_e];
        for (m, n, _) in pattern.entries() {
            is_diag.push(m == n);
            if m == n {
                let (u, v) = endpoints[m];
                indices.push(u);
                indices.push(v);
                diag_seen[m] = true;
            } else {
                let (a, b) = endpoints[m];
                let (c, d) = endpoints[n];
                let shared: Vec<usize> = [a, b]
                    .into_iter()
                    .filter(|&x| x == c || x == d)
                    .collect();
                match shared.len() {
                    1 => indices.push(shared[0]),
                    0 => {
                        return Err(Error::Invalid(format!(
                            "pattern entry ({m},{n}) joins edges with no shared node"
                        )))
                    }
                    _ => {
                        return Err(Error::Invalid(format!(
                            "edges {m} and {n} share two nodes (multi-edge input)"
                        )))
                    }
                }
            }
            offsets.push(indices.len());
        }
        if diag_seen.iter().any(|&d| !d) {
            return Err(Error::Contract(
                "gate pattern must store every self-loop diagonal".into(),
            ));
        }
        Ok(GateMap {
            offsets,
            indices,
            is_diag,
            input_len: t.rows(),
        })
    }

    #[inline]
    pub fn group(&self, entry: usize) -> &[usize] {
        &self.indices[self.offsets[entry]..self.offsets[entry + 1]]
    }

    pub fn num_entries(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// Recover each edge's endpoint pair from an incidence matrix; every column
/// must contain exactly two ones.
fn endpoints_from_incidence<S: Scalar>(
    t: &SparseMatrix<S>,
) -> Result<(Vec<(usize, usize)>, Vec<Vec<usize>>)> {
    let n_e = t.cols();
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n_e];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); t.rows()];
    for (i, m, v) in t.entries() {
        if v != S::one() {
            return Err(Error::Invalid(format!(
                "incidence entry ({i},{m}) is {v}, expected 1"
            )));
        }
        cols[m].push(i);
        incident[i].push(m);
    }
    let mut endpoints = Vec::with_capacity(n_e);
    for (m, c) in cols.iter().enumerate() {
        if c.len() != 2 {
            return Err(Error::Invalid(format!(
                "incidence column {m} has {} ones, expected 2",
                c.len()
            )));
        }
        endpoints.push((c[0].min(c[1]), c[0].max(c[1])));
    }
    Ok((endpoints, incident))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph<f64> {
        // a--b--c with edges e1=(0,1), e2=(1,2)
        Graph::new(
            3,
            vec![(0, 1), (1, 2)],
            DenseMatrix::zeros(3, 1),
            DenseMatrix::zeros(2, 1),
        )
        .unwrap()
    }

    fn k3() -> Graph<f64> {
        Graph::new(
            3,
            vec![(0, 1), (0, 2), (1, 2)],
            DenseMatrix::zeros(3, 1),
            DenseMatrix::zeros(3, 1),
        )
        .unwrap()
    }

    #[test]
    fn incidence_of_path() {
        let t = path3().build_incidence().to_dense();
        let expect =
            DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(t, expect);
    }

    #[test]
    fn incidence_of_single_edge() {
        let g = Graph::<f64>::new(
            2,
            vec![(1, 0)],
            DenseMatrix::zeros(2, 1),
            DenseMatrix::zeros(1, 1),
        )
        .unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        let t = g.build_incidence().to_dense();
        assert_eq!(t, DenseMatrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap());
    }

    #[test]
    fn incidence_of_k3() {
        let t = k3().build_incidence().to_dense();
        let expect = DenseMatrix::from_rows(&[
            vec![1.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ])
        .unwrap();
        assert_eq!(t, expect);
    }

    #[test]
    fn line_graph_of_path() {
        let ae = path3().build_line_graph().to_dense();
        assert_eq!(
            ae,
            DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
        );
    }

    #[test]
    fn line_graph_of_single_edge_is_trivial() {
        let g = Graph::<f64>::new(
            2,
            vec![(0, 1)],
            DenseMatrix::zeros(2, 1),
            DenseMatrix::zeros(1, 1),
        )
        .unwrap();
        let ae = g.build_line_graph();
        assert_eq!(ae.shape(), (1, 1));
        assert_eq!(ae.nnz(), 0);
    }

    #[test]
    fn line_graph_of_k3_is_k3() {
        // Brute force over all edge pairs: in K3 every pair shares a node.
        let ae = k3().build_line_graph().to_dense();
        for m in 0..3 {
            for n in 0..3 {
                let expect = if m == n { 0.0 } else { 1.0 };
                assert_eq!(ae.at(m, n), expect);
            }
        }
    }

    #[test]
    fn bundle_of_path_normalizes_line_graph() {
        let bundle = path3().build_bundle().unwrap();
        let nae = bundle.norm_ae.to_dense();
        for r in 0..2 {
            for c in 0..2 {
                assert!((nae.at(r, c) - 0.5).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn bundle_of_edgeless_graph() {
        let g = Graph::<f64>::new(2, vec![], DenseMatrix::zeros(2, 1), DenseMatrix::zeros(0, 1))
            .unwrap();
        let b = g.build_bundle().unwrap();
        assert_eq!(b.a_e.shape(), (0, 0));
        assert_eq!(b.norm_av.to_dense(), DenseMatrix::identity(2));
    }

    #[test]
    fn duplicate_edge_rejected() {
        let r = Graph::<f64>::new(
            3,
            vec![(0, 1), (1, 0)],
            DenseMatrix::zeros(3, 1),
            DenseMatrix::zeros(2, 1),
        );
        assert!(r.is_err());
    }

    #[test]
    fn self_loop_rejected() {
        let r = Graph::<f64>::new(
            2,
            vec![(1, 1)],
            DenseMatrix::zeros(2, 1),
            DenseMatrix::zeros(1, 1),
        );
        assert!(r.is_err());
    }

    #[test]
    fn induced_subgraph_identity_and_empty() {
        let g = path3();
        let (full, _) = g.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(full.edges(), g.edges());
        let (ends, map) = g.induced_subgraph(&[0, 2]).unwrap();
        assert_eq!(ends.num_nodes(), 2);
        assert_eq!(ends.num_edges(), 0);
        assert_eq!(map.node_map[1], None);
    }

    #[test]
    fn induced_subgraph_out_of_range() {
        assert!(path3().induced_subgraph(&[7]).is_err());
    }

    #[test]
    fn batch_of_one_graph_is_identity() {
        let g = path3();
        let batch = block_diag_batch(std::slice::from_ref(&g)).unwrap();
        assert_eq!(batch.graph.edges(), g.edges());
        assert_eq!(batch.segment_ids, vec![0, 0, 0]);
    }

    #[test]
    fn batch_of_two_single_edges() {
        let g = Graph::<f64>::new(
            2,
            vec![(0, 1)],
            DenseMatrix::zeros(2, 1),
            DenseMatrix::zeros(1, 1),
        )
        .unwrap();
        let batch = block_diag_batch(&[g.clone(), g]).unwrap();
        assert_eq!(batch.graph.num_nodes(), 4);
        assert_eq!(batch.graph.edges(), &[(0, 1), (2, 3)]);
        let ae = batch.graph.build_line_graph();
        assert_eq!(ae.shape(), (2, 2));
        assert_eq!(ae.nnz(), 0);
    }

    #[test]
    fn batch_feature_width_mismatch_is_error() {
        let a = Graph::<f64>::new(1, vec![], DenseMatrix::zeros(1, 2), DenseMatrix::zeros(0, 1))
            .unwrap();
        let b = Graph::<f64>::new(1, vec![], DenseMatrix::zeros(1, 3), DenseMatrix::zeros(0, 1))
            .unwrap();
        assert!(block_diag_batch(&[a, b]).is_err());
    }

    #[test]
    fn edge_gate_map_on_path() {
        let g = path3();
        let b = g.build_bundle().unwrap();
        let map = GateMap::edge_gate(&b.t, &b.norm_av).unwrap();
        // Pattern rows: (0,0) (0,1) / (1,0) (1,1) (1,2) / (2,1) (2,2)
        let groups: Vec<Vec<usize>> = (0..map.num_entries()).map(|e| map.group(e).to_vec()).collect();
        assert_eq!(groups[0], vec![0]); // diag a: edge e1
        assert_eq!(groups[1], vec![0]); // (a,b): e1
        assert_eq!(groups[3], vec![0, 1]); // diag b: both edges
    }

    #[test]
    fn node_gate_map_on_path() {
        let g = path3();
        let b = g.build_bundle().unwrap();
        let map = GateMap::node_gate(&b.t, &b.norm_ae).unwrap();
        // Pattern rows: (0,0) (0,1) / (1,0) (1,1)
        assert_eq!(map.group(0), &[0, 1]); // diag e1: endpoints a, b
        assert_eq!(map.group(1), &[1]); // (e1,e2): shared node b
        assert_eq!(map.group(3), &[1, 2]); // diag e2: endpoints b, c
    }
}
