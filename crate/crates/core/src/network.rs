//! Wrap-around interference network topologies and channel realizations.
//!
//! Indices are 1-based and cyclic: user K+1 is user 1. A topology records
//! which (receiver, transmitter) links carry a nonzero channel and which
//! receivers each decoder jointly processes. A channel realization attaches a
//! T x T diagonal matrix of exact rationals to every present link, the shape
//! produced by a T-fold symbol extension of a scalar channel.

use crate::matrix::RatMatrix;
use crate::rational::{parse_rat, rat, Rat};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    /// Transmitter j reaches receivers j-1, j, j+1 only.
    Local,
    /// Every transmitter reaches every receiver.
    Full,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetworkError {
    #[error("need at least 3 users for a wrap-around network, got {0}")]
    UserCount(usize),
    #[error("cluster size {size} out of range for {users} users")]
    ClusterSize { size: usize, users: usize },
    #[error("symbol extension length must be positive")]
    ExtensionLength,
    #[error("expected {expected} {what}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("link ({rx},{tx}) absent from the topology")]
    AbsentLink { rx: usize, tx: usize },
    #[error("channel document invalid: {0}")]
    Document(String),
}

/// Link structure and decoder clustering of a K-user network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkTopology {
    pub users: usize,
    pub connectivity: Connectivity,
    /// Present (receiver, transmitter) pairs.
    pub links: BTreeSet<(usize, usize)>,
    /// Decoder k jointly processes these receivers, in order.
    pub clusters: BTreeMap<usize, Vec<usize>>,
    pub wrap_around: bool,
}

impl NetworkTopology {
    pub fn cluster_size(&self) -> usize {
        self.clusters.values().next().map_or(0, Vec::len)
    }

    pub fn has_link(&self, rx: usize, tx: usize) -> bool {
        self.links.contains(&(rx, tx))
    }

    /// Successor index, wrapping K to 1.
    pub fn succ(&self, i: usize) -> usize {
        i % self.users + 1
    }

    /// Predecessor index, wrapping 1 to K.
    pub fn pred(&self, i: usize) -> usize {
        (i + self.users - 2) % self.users + 1
    }
}

/// Builds the wrap-around topology. `local` places the three links
/// (k,k-1), (k,k), (k,k+1) per receiver; `full` places all K^2. Decoder k's
/// cluster is the consecutive window {k, ..., k+cluster_size-1} mod K.
pub fn build_topology(
    users: usize,
    connectivity: Connectivity,
    cluster_size: usize,
) -> Result<NetworkTopology, NetworkError> {
    if users < 3 {
        return Err(NetworkError::UserCount(users));
    }
    if cluster_size < 1 || cluster_size > users {
        return Err(NetworkError::ClusterSize {
            size: cluster_size,
            users,
        });
    }
    let mut links = BTreeSet::new();
    for rx in 1..=users {
        match connectivity {
            Connectivity::Local => {
                links.insert((rx, rx));
                links.insert((rx, rx % users + 1));
                links.insert((rx, (rx + users - 2) % users + 1));
            }
            Connectivity::Full => {
                for tx in 1..=users {
                    links.insert((rx, tx));
                }
            }
        }
    }
    let clusters = (1..=users)
        .map(|k| {
            let window = (0..cluster_size).map(|o| (k + o - 1) % users + 1).collect();
            (k, window)
        })
        .collect();
    Ok(NetworkTopology {
        users,
        connectivity,
        links,
        clusters,
        wrap_around: true,
    })
}

/// A symbol-extended channel: a T x T diagonal block of exact rationals per
/// present link. Absent links are identically zero and carry no entry.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelRealization {
    pub topology: NetworkTopology,
    pub t: usize,
    entries: BTreeMap<(usize, usize), Vec<Rat>>,
}

impl ChannelRealization {
    pub fn new(
        topology: NetworkTopology,
        t: usize,
        entries: BTreeMap<(usize, usize), Vec<Rat>>,
    ) -> Result<Self, NetworkError> {
        if t == 0 {
            return Err(NetworkError::ExtensionLength);
        }
        for (&(rx, tx), diag) in &entries {
            if !topology.has_link(rx, tx) {
                return Err(NetworkError::AbsentLink { rx, tx });
            }
            if diag.len() != t {
                return Err(NetworkError::Dimension {
                    what: "diagonal entries",
                    expected: t,
                    got: diag.len(),
                });
            }
        }
        Ok(Self {
            topology,
            t,
            entries,
        })
    }

    /// Diagonal of H(rx, tx), if the link is present and nonzero.
    pub fn diagonal(&self, rx: usize, tx: usize) -> Option<&[Rat]> {
        self.entries.get(&(rx, tx)).map(Vec::as_slice)
    }

    /// Full T x T matrix of H(rx, tx); zero for absent links.
    pub fn matrix(&self, rx: usize, tx: usize) -> RatMatrix {
        match self.entries.get(&(rx, tx)) {
            Some(diag) => RatMatrix::from_diagonal(diag),
            None => RatMatrix::zeros(self.t, self.t),
        }
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Vec<Rat>> {
        &self.entries
    }

    /// Same links and coefficients under a re-clustered topology.
    pub fn with_cluster_size(&self, cluster_size: usize) -> Result<Self, NetworkError> {
        let topology = build_topology(
            self.topology.users,
            self.topology.connectivity,
            cluster_size,
        )?;
        Ok(Self {
            topology,
            t: self.t,
            entries: self.entries.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        let doc = ChannelDocument {
            users: self.topology.users,
            t: self.t,
            connectivity: self.topology.connectivity,
            entries: self
                .entries
                .iter()
                .map(|(&(rx, tx), diag)| LinkEntry {
                    rx,
                    tx,
                    diag: diag.iter().map(Rat::to_string).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("channel document serializes")
    }

    /// Parses the JSON interchange form. The document carries no cluster
    /// information; decoding clusters default to pairwise.
    pub fn from_json(text: &str) -> Result<Self, NetworkError> {
        let doc: ChannelDocument =
            serde_json::from_str(text).map_err(|e| NetworkError::Document(e.to_string()))?;
        let topology = build_topology(doc.users, doc.connectivity, 2)?;
        let mut entries = BTreeMap::new();
        for entry in doc.entries {
            let diag = entry
                .diag
                .iter()
                .map(|s| parse_rat(s).map_err(NetworkError::Document))
                .collect::<Result<Vec<_>, _>>()?;
            if entries.insert((entry.rx, entry.tx), diag).is_some() {
                return Err(NetworkError::Document(format!(
                    "duplicate entry for link ({},{})",
                    entry.rx, entry.tx
                )));
            }
        }
        Self::new(topology, doc.t, entries)
    }
}

#[derive(Serialize, Deserialize)]
struct ChannelDocument {
    #[serde(rename = "K")]
    users: usize,
    #[serde(rename = "T")]
    t: usize,
    connectivity: Connectivity,
    entries: Vec<LinkEntry>,
}

#[derive(Serialize, Deserialize)]
struct LinkEntry {
    rx: usize,
    tx: usize,
    diag: Vec<String>,
}

/// The hand-built 4-user instance over a 5-symbol extension: with
/// G = diag(1..5), every direct link is the identity, every link from the
/// successor transmitter is G, and every link from the predecessor is G^2.
/// The assignment is cyclically symmetric, so one pattern serves all four
/// receivers.
pub fn build_example_channel() -> ChannelRealization {
    let topology = build_topology(4, Connectivity::Local, 2).expect("valid parameters");
    let gpow = |e: u32| -> Vec<Rat> { (1..=5).map(|v: i64| rat(v.pow(e))).collect() };
    let mut entries = BTreeMap::new();
    for k in 1..=4 {
        entries.insert((k, k), gpow(0));
        entries.insert((k, topology.succ(k)), gpow(1));
        entries.insert((k, topology.pred(k)), gpow(2));
    }
    ChannelRealization::new(topology, 5, entries).expect("entries match topology")
}

/// Samples nonzero integer diagonals in [-9, 9] on every present link.
/// Deterministic for a given seed.
pub fn sample_generic_channel(
    topology: &NetworkTopology,
    t: usize,
    seed: u64,
) -> Result<ChannelRealization, NetworkError> {
    if t == 0 {
        return Err(NetworkError::ExtensionLength);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = BTreeMap::new();
    for &(rx, tx) in &topology.links {
        let diag = (0..t)
            .map(|_| loop {
                let v: i64 = rng.random_range(-9..=9);
                if v != 0 {
                    break rat(v);
                }
            })
            .collect();
        entries.insert((rx, tx), diag);
    }
    ChannelRealization::new(topology.clone(), t, entries)
}

/// Evaluates Y_i = sum over present links (i,j) of H(i,j) X_j + Z_i.
/// `inputs` and `noise` hold one length-T column per user, index 1 first.
pub fn received_signal(
    channel: &ChannelRealization,
    inputs: &[Vec<Rat>],
    noise: &[Vec<Rat>],
) -> Result<Vec<Vec<Rat>>, NetworkError> {
    let users = channel.topology.users;
    for (what, cols) in [("input columns", inputs), ("noise columns", noise)] {
        if cols.len() != users {
            return Err(NetworkError::Dimension {
                what,
                expected: users,
                got: cols.len(),
            });
        }
        if let Some(bad) = cols.iter().find(|c| c.len() != channel.t) {
            return Err(NetworkError::Dimension {
                what: "column length",
                expected: channel.t,
                got: bad.len(),
            });
        }
    }
    let out = (1..=users)
        .map(|rx| {
            let mut y = noise[rx - 1].clone();
            for tx in 1..=users {
                if let Some(diag) = channel.diagonal(rx, tx) {
                    for (row, h) in diag.iter().enumerate() {
                        y[row] += h * &inputs[tx - 1][row];
                    }
                }
            }
            y
        })
        .collect();
    Ok(out)
}
