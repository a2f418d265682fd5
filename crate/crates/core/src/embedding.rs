//! ISOMAP-style embeddings of users and items, hyperedge feature vectors and
//! the Gaussian kernel that compares them.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::learning::ActionLog;
use crate::{Error, Hyperedge, PurchaseNode, SocialGraph};

pub const DEFAULT_DIMENSION: usize = 8;

/// How item distances are derived.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ItemGraph {
    /// Every pair of items at distance 1.
    #[default]
    Complete,
    /// Items linked when one user bought both.
    CoPurchase,
}

/// Symmetric distance matrix with labelled rows.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    /// Row-major `n x n`.
    pub values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }
}

/// Hop distances with edges taken as undirected. Users in different
/// components sit at `max(diameter, 1) + 1`, where the diameter is the largest
/// finite distance. Rows follow the sorted user order.
pub fn geodesic_distances(graph: &SocialGraph) -> DistanceMatrix {
    let labels: Vec<String> = graph.users().cloned().collect();
    let n = labels.len();
    let index: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();
    let adj: Vec<Vec<usize>> = labels
        .iter()
        .map(|u| {
            let mut nb: Vec<usize> = graph
                .in_neighbors(u)
                .iter()
                .chain(graph.out_neighbors(u))
                .map(|v| index[v.as_str()])
                .collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();

    const UNREACHED: usize = usize::MAX;
    let mut hops = vec![UNREACHED; n * n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        let row = &mut hops[s * n..(s + 1) * n];
        row[s] = 0;
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if row[y] == UNREACHED {
                    row[y] = row[x] + 1;
                    queue.push_back(y);
                }
            }
        }
    }
    let diameter = hops.iter().filter(|&&h| h != UNREACHED).max().copied().unwrap_or(0);
    let far = (diameter.max(1) + 1) as f64;
    let values = hops
        .into_iter()
        .map(|h| if h == UNREACHED { far } else { h as f64 })
        .collect();
    DistanceMatrix { labels, values }
}

/// Classical MDS output.
#[derive(Debug, Clone, PartialEq)]
pub struct MdsResult {
    /// One `k`-vector per input row.
    pub coords: Vec<Vec<f64>>,
    /// Fewer than `k` positive eigenvalues were available; trailing
    /// dimensions are zero.
    pub padded: bool,
}

/// Classical multidimensional scaling of a distance matrix (row-major
/// `n x n`): eigendecomposition of `B = -1/2 H D² H` with `D²` the entrywise
/// squared distances. Each eigenvector is signed so that its first nonzero
/// entry is positive.
pub fn mds_embed(distances: &[f64], n: usize, k: usize) -> Result<MdsResult, Error> {
    if distances.len() != n * n {
        return Err(Error::InvalidConfig("distance matrix must be square"));
    }
    if k > n {
        return Err(Error::InvalidConfig("embedding dimension exceeds point count"));
    }
    if n == 0 {
        return Ok(MdsResult { coords: Vec::new(), padded: k > 0 });
    }
    let sq: Vec<f64> = distances.iter().map(|d| d * d).collect();
    let row_mean: Vec<f64> = (0..n).map(|i| sq[i * n..(i + 1) * n].iter().sum::<f64>() / n as f64).collect();
    let grand = row_mean.iter().sum::<f64>() / n as f64;
    let mut b = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            // Symmetrized so Jacobi sees an exactly symmetric matrix.
            let x = sq[i * n + j] - row_mean[i] - row_mean[j] + grand;
            let y = sq[j * n + i] - row_mean[j] - row_mean[i] + grand;
            b[i * n + j] = -0.25 * (x + y);
        }
    }
    let (values, vectors) = jacobi_eigen(&mut b, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| values[y].total_cmp(&values[x]).then(x.cmp(&y)));
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = scale * 1e-12;

    let mut coords = vec![vec![0.0; k]; n];
    let mut padded = false;
    for (dim, &col) in order.iter().take(k).enumerate() {
        let lambda = values[col];
        if lambda <= floor {
            padded = true;
            break;
        }
        let root = libm::sqrt(lambda);
        let flip = (0..n)
            .map(|r| vectors[r * n + col])
            .find(|z| libm::fabs(*z) > 1e-12)
            .is_some_and(|z| z < 0.0);
        for (r, c) in coords.iter_mut().enumerate() {
            let z = vectors[r * n + col];
            c[dim] = if flip { -z } else { z } * root;
        }
    }
    Ok(MdsResult { coords, padded })
}

/// Cyclic Jacobi on a symmetric row-major matrix, destroyed in place.
/// Returns eigenvalues and eigenvectors (as columns of a row-major matrix).
fn jacobi_eigen(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off <= total * 1e-30 || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = libm::copysign(1.0, theta) / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for r in 0..n {
                    let (arp, arq) = (a[r * n + p], a[r * n + q]);
                    a[r * n + p] = c * arp - s * arq;
                    a[r * n + q] = s * arp + c * arq;
                }
                for r in 0..n {
                    let (apr, aqr) = (a[p * n + r], a[q * n + r]);
                    a[p * n + r] = c * apr - s * aqr;
                    a[q * n + r] = s * apr + c * aqr;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    let (vrp, vrq) = (v[r * n + p], v[r * n + q]);
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

/// User and item coordinates. A purchase node maps to `user ∥ item`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Embedding {
    pub dim: usize,
    pub users: BTreeMap<String, Vec<f64>>,
    pub items: BTreeMap<String, Vec<f64>>,
    /// Some block needed zero padding.
    pub padded: bool,
}

impl Embedding {
    /// Embeds the users of `social` and the given items.
    pub fn build(social: &SocialGraph, items: &[String], dim: usize) -> Result<Self, Error> {
        let users = embed_matrix(&geodesic_distances(social), dim)?;
        let (items, ipad) = item_embedding(items, dim)?;
        Ok(Self {
            dim,
            padded: users.1 || ipad,
            users: users.0,
            items,
        })
    }

    /// Writes the `2 * dim` block of `node` into `out`.
    pub fn extend_node(&self, node: &PurchaseNode, out: &mut Vec<f64>) -> Result<(), Error> {
        let u = self
            .users
            .get(&node.user)
            .ok_or_else(|| Error::MissingEmbedding(node.user.clone()))?;
        let i = self
            .items
            .get(&node.item)
            .ok_or_else(|| Error::MissingEmbedding(node.item.clone()))?;
        out.extend_from_slice(u);
        out.extend_from_slice(i);
        Ok(())
    }
}

/// MDS of a labelled matrix, with the dimension clipped to the point count
/// and zero-filled back up to `dim`.
fn embed_matrix(m: &DistanceMatrix, dim: usize) -> Result<(BTreeMap<String, Vec<f64>>, bool), Error> {
    let k = dim.min(m.len());
    let mds = mds_embed(&m.values, m.len(), k)?;
    let map = m
        .labels
        .iter()
        .cloned()
        .zip(mds.coords.into_iter().map(|mut c| {
            c.resize(dim, 0.0);
            c
        }))
        .collect();
    Ok((map, mds.padded || k < dim))
}

/// Items on the complete graph: every pair at distance 1. The flag reports
/// zero padding.
pub fn item_embedding(items: &[String], dim: usize) -> Result<(BTreeMap<String, Vec<f64>>, bool), Error> {
    let mut labels: Vec<String> = items.to_vec();
    labels.sort();
    labels.dedup();
    let n = labels.len();
    let values = (0..n * n).map(|x| if x / n == x % n { 0.0 } else { 1.0 }).collect();
    embed_matrix(&DistanceMatrix { labels, values }, dim)
}

/// Items linked whenever a single user bought both; distances are hop counts
/// in that graph.
pub fn co_purchase_item_embedding(log: &ActionLog, dim: usize) -> Result<(BTreeMap<String, Vec<f64>>, bool), Error> {
    let mut by_user: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for a in log.records() {
        by_user.entry(&a.node.user).or_default().push(&a.node.item);
    }
    let mut g = SocialGraph::new();
    for items in by_user.values_mut() {
        items.sort_unstable();
        items.dedup();
        for (x, a) in items.iter().enumerate() {
            g.add_user(*a);
            for b in &items[x + 1..] {
                g.add_edge(*a, *b);
            }
        }
    }
    embed_matrix(&geodesic_distances(&g), dim)
}

/// Embeds every user of `social` or `log` and every item of `log`.
pub fn embed_log(social: &SocialGraph, log: &ActionLog, items: ItemGraph, dim: usize) -> Result<Embedding, Error> {
    let mut users = social.clone();
    for a in log.records() {
        users.add_user(a.node.user.as_str());
    }
    let (user_vecs, upad) = embed_matrix(&geodesic_distances(&users), dim)?;
    let (item_vecs, ipad) = match items {
        ItemGraph::Complete => {
            let names: Vec<String> = log.records().iter().map(|a| a.node.item.clone()).collect();
            item_embedding(&names, dim)?
        }
        ItemGraph::CoPurchase => co_purchase_item_embedding(log, dim)?,
    };
    Ok(Embedding {
        dim,
        users: user_vecs,
        items: item_vecs,
        padded: upad || ipad,
    })
}

/// Feature vector of a hyperedge: the blocks of its sources in sorted order,
/// then the block of its destination. Length `(|sources| + 1) * 2 * dim`.
pub fn hyperedge_vector(edge: &Hyperedge, emb: &Embedding) -> Result<Vec<f64>, Error> {
    let mut sources: Vec<&PurchaseNode> = edge.sources.iter().collect();
    sources.sort();
    let mut out = Vec::with_capacity((sources.len() + 1) * 2 * emb.dim);
    for s in sources {
        emb.extend_node(s, &mut out)?;
    }
    emb.extend_node(&edge.dest, &mut out)?;
    Ok(out)
}

/// `exp(-|x|² / 2h²)`; at `h = 0` the indicator of `x = 0`.
pub fn gaussian_kernel(x: &[f64], h: f64) -> f64 {
    gaussian_weight(x.iter().map(|v| v * v).sum(), h)
}

/// [`gaussian_kernel`] from a precomputed squared norm.
pub fn gaussian_weight(norm_sq: f64, h: f64) -> f64 {
    if h == 0.0 {
        return if norm_sq == 0.0 { 1.0 } else { 0.0 };
    }
    if h.is_infinite() {
        return 1.0;
    }
    libm::exp(-norm_sq / (2.0 * h * h))
}
