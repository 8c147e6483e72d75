//! Linear precoding schemes and exact decodability checks for clustered
//! decoders.
//!
//! A decoder's observation splits into a desired block and an interference
//! block. Decodability is a rank statement: the joint matrix must gain
//! exactly d_k dimensions over the interference alone, so a linear projection
//! can zero-force every interfering stream. All ranks are computed exactly;
//! the interesting instances sit right at the decodability boundary where a
//! floating-point tolerance could flip the verdict.

use crate::matrix::RatMatrix;
use crate::network::{build_topology, ChannelRealization, Connectivity, NetworkError};
use crate::rational::{frac, rat, rat_opt_text, Rat};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlignmentError {
    #[error("beam matrix for user {user} is {rows}x{cols}, expected {t} rows")]
    BeamShape {
        user: usize,
        rows: usize,
        cols: usize,
        t: usize,
    },
    #[error("user {user} sends {streams} streams over extension length {t}")]
    TooManyStreams {
        user: usize,
        streams: usize,
        t: usize,
    },
    #[error("beam matrix for user {user} has rank {rank}, expected {streams}")]
    RankDeficientBeam {
        user: usize,
        rank: usize,
        streams: usize,
    },
    #[error("scheme extension length {scheme} does not match channel {channel}")]
    ExtensionMismatch { scheme: usize, channel: usize },
    #[error("scheme covers {scheme} users, channel has {channel}")]
    UserMismatch { scheme: usize, channel: usize },
    #[error("decoder index {0} out of range")]
    DecoderIndex(usize),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Per-user beamforming matrices over a T-symbol extension.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearScheme {
    t: usize,
    beams: Vec<RatMatrix>,
}

impl LinearScheme {
    /// Validates shape and full column rank of every beam matrix.
    pub fn new(t: usize, beams: Vec<RatMatrix>) -> Result<Self, AlignmentError> {
        for (idx, b) in beams.iter().enumerate() {
            let user = idx + 1;
            if b.nrows() != t {
                return Err(AlignmentError::BeamShape {
                    user,
                    rows: b.nrows(),
                    cols: b.ncols(),
                    t,
                });
            }
            if b.ncols() > t {
                return Err(AlignmentError::TooManyStreams {
                    user,
                    streams: b.ncols(),
                    t,
                });
            }
            let rank = b.rank();
            if rank != b.ncols() {
                return Err(AlignmentError::RankDeficientBeam {
                    user,
                    rank,
                    streams: b.ncols(),
                });
            }
        }
        Ok(Self { t, beams })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn users(&self) -> usize {
        self.beams.len()
    }

    /// Beam matrix of user k (1-based).
    pub fn beam(&self, k: usize) -> &RatMatrix {
        &self.beams[k - 1]
    }

    pub fn streams(&self, k: usize) -> usize {
        self.beams[k - 1].ncols()
    }

    pub fn total_streams(&self) -> usize {
        self.beams.iter().map(RatMatrix::ncols).sum()
    }
}

/// The 5-extension scheme: every user sends 3 streams along w, Gw, G^2 w
/// with w all-ones and G = diag(1..5). Column j of each beam matrix is the
/// j-th power of G applied to w, so the matrix is Vandermonde on nodes 1..5.
pub fn example_scheme() -> LinearScheme {
    let beam = RatMatrix::from_fn(5, 3, |i, j| rat((i as i64 + 1).pow(j as u32)));
    LinearScheme::new(5, vec![beam; 4]).expect("Vandermonde columns are independent")
}

/// What decoder k sees: stacked desired and interference blocks, one row
/// block per receiver in the cluster.
#[derive(Clone, Debug)]
pub struct DecoderView {
    pub k: usize,
    pub desired: RatMatrix,
    pub interference: RatMatrix,
    /// (interferer, stream) provenance of each interference column, 1-based.
    pub labels: Vec<(usize, usize)>,
}

impl DecoderView {
    /// Desired and interference side by side.
    pub fn joint(&self) -> RatMatrix {
        RatMatrix::hstack(&[&self.desired, &self.interference])
    }
}

fn stacked_through_cluster(
    channel: &ChannelRealization,
    cluster: &[usize],
    tx: usize,
    beam: &RatMatrix,
) -> RatMatrix {
    let blocks: Vec<RatMatrix> = cluster
        .iter()
        .map(|&rx| &channel.matrix(rx, tx) * beam)
        .collect();
    let refs: Vec<&RatMatrix> = blocks.iter().collect();
    RatMatrix::vstack(&refs)
}

/// Assembles decoder k's view. Interference columns are ordered by
/// interferer index ascending, then stream index ascending; interferers that
/// reach no receiver in the cluster are omitted entirely.
pub fn decoder_view(
    channel: &ChannelRealization,
    scheme: &LinearScheme,
    k: usize,
) -> Result<DecoderView, AlignmentError> {
    let topo = &channel.topology;
    if scheme.t != channel.t {
        return Err(AlignmentError::ExtensionMismatch {
            scheme: scheme.t,
            channel: channel.t,
        });
    }
    if scheme.users() != topo.users {
        return Err(AlignmentError::UserMismatch {
            scheme: scheme.users(),
            channel: topo.users,
        });
    }
    if k < 1 || k > topo.users {
        return Err(AlignmentError::DecoderIndex(k));
    }
    let cluster = &topo.clusters[&k];
    let desired = stacked_through_cluster(channel, cluster, k, scheme.beam(k));
    let heard: Vec<usize> = (1..=topo.users)
        .filter(|&j| j != k && cluster.iter().any(|&rx| topo.has_link(rx, j)))
        .collect();
    let mut labels = Vec::new();
    let blocks: Vec<RatMatrix> = heard
        .iter()
        .map(|&j| {
            labels.extend((1..=scheme.streams(j)).map(|s| (j, s)));
            stacked_through_cluster(channel, cluster, j, scheme.beam(j))
        })
        .collect();
    let interference = if blocks.is_empty() {
        RatMatrix::zeros(cluster.len() * channel.t, 0)
    } else {
        let refs: Vec<&RatMatrix> = blocks.iter().collect();
        RatMatrix::hstack(&refs)
    };
    Ok(DecoderView {
        k,
        desired,
        interference,
        labels,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecoderCheck {
    pub k: usize,
    pub interference_rank: usize,
    pub joint_rank: usize,
    pub decodable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlignmentReport {
    pub per_decoder: Vec<DecoderCheck>,
    /// Total achieved DoF; absent when some decoder fails.
    #[serde(with = "rat_opt_text")]
    pub dof: Option<Rat>,
}

impl AlignmentReport {
    pub fn all_decodable(&self) -> bool {
        self.per_decoder.iter().all(|d| d.decodable)
    }

    pub fn failing_decoders(&self) -> Vec<usize> {
        self.per_decoder
            .iter()
            .filter(|d| !d.decodable)
            .map(|d| d.k)
            .collect()
    }
}

/// Runs the rank test at every decoder: with interference rank r_I and joint
/// rank r_J, user k's d_k streams are zero-forceable exactly when
/// r_J = r_I + d_k. Reports total DoF (sum of streams over T) when every
/// decoder passes.
pub fn alignment_report(
    channel: &ChannelRealization,
    scheme: &LinearScheme,
) -> Result<AlignmentReport, AlignmentError> {
    let mut per_decoder = Vec::with_capacity(channel.topology.users);
    for k in 1..=channel.topology.users {
        let view = decoder_view(channel, scheme, k)?;
        let interference_rank = view.interference.rank();
        let joint_rank = view.joint().rank();
        per_decoder.push(DecoderCheck {
            k,
            interference_rank,
            joint_rank,
            decodable: joint_rank == interference_rank + scheme.streams(k),
        });
    }
    let report = AlignmentReport {
        dof: per_decoder
            .iter()
            .all(|d| d.decodable)
            .then(|| frac(scheme.total_streams() as i64, scheme.t as i64)),
        per_decoder,
    };
    Ok(report)
}

/// Cyclically symmetric power-of-G channel assignment: direct links carry
/// G^direct, links from the successor transmitter G^succ, links from the
/// predecessor G^pred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PowerAssignment {
    pub direct: u32,
    pub succ: u32,
    pub pred: u32,
}

/// The 4-user, 5-extension channel realized by a power assignment.
pub fn power_assignment_channel(p: PowerAssignment) -> ChannelRealization {
    let topology = build_topology(4, Connectivity::Local, 2).expect("valid parameters");
    let gpow = |e: u32| -> Vec<Rat> { (1..=5).map(|v: i64| rat(v.pow(e))).collect() };
    let mut entries = BTreeMap::new();
    for k in 1..=4 {
        entries.insert((k, k), gpow(p.direct));
        entries.insert((k, topology.succ(k)), gpow(p.succ));
        entries.insert((k, topology.pred(k)), gpow(p.pred));
    }
    ChannelRealization::new(topology, 5, entries).expect("entries match topology")
}

/// Exhausts all cyclically symmetric assignments with exponents up to
/// `max_exponent` and returns those for which the example scheme is fully
/// decodable at DoF 12/5, in lexicographic (direct, succ, pred) order.
pub fn search_power_assignment(max_exponent: u32) -> Vec<PowerAssignment> {
    let scheme = example_scheme();
    let target = frac(12, 5);
    let mut found = Vec::new();
    for direct in 0..=max_exponent {
        for succ in 0..=max_exponent {
            for pred in 0..=max_exponent {
                let p = PowerAssignment { direct, succ, pred };
                let report = alignment_report(&power_assignment_channel(p), &scheme)
                    .expect("assignment channel matches the scheme");
                if report.dof.as_ref() == Some(&target) {
                    found.push(p);
                }
            }
        }
    }
    found
}
