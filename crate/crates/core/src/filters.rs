//! Cooperative information-filter algorithms over one exchange round.
//!
//! All four algorithms track the two-dimensional (frequency, phase) state in
//! information form and share the prediction step
//!
//! ```text
//! omega' = W - W (omega + W)^{-1} W        (equals (V + Q)^{-1})
//! mu'    = omega' * m
//! ```
//!
//! where `W` is the process noise information matrix, `V = omega^{-1}` the
//! updated covariance, and `m` the updated mean. They differ in how a node
//! turns its neighborhood's messages into that updated estimate:
//!
//! * `ha-dkf`: consensus on measurements (weighted sums of `U*y` and `U`)
//!   plus consensus on predicted information pairs, additive correction, then
//!   a covariance-intersection style re-fusion of the neighborhood's updated
//!   estimates before predicting;
//! * `kf-hcmci`: the same measurement/information consensus and correction,
//!   predicting directly from the corrected pair;
//! * `kf-dfpc`: update from the node's own measurement only, then the same
//!   re-fusion of updated estimates;
//! * `dkf`: update from the node's own measurement, then average the
//!   neighborhood's updated means while keeping the local covariance.
//!
//! A round is synchronous and two-phase. Predicted pairs, measurements, and
//! measurement information go out first and feed [`local_update`]; the
//! resulting updated pairs go out second and feed [`fuse_and_predict`].
//! [`step_node`] composes the two for callers that already hold both message
//! sets. Inboxes list the node's own message first, then neighbors in
//! ascending node order; sums run in inbox order so results are reproducible
//! bit for bit.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{InfoPair, Mat2, MomentPair, Vec2};

/// The four estimator variants. String forms are the CLI tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Algorithm {
    /// Consensus on estimates: own-measurement update, then mean averaging.
    #[serde(rename = "dkf")]
    DkfCe,
    /// Own-measurement update followed by estimate/covariance re-fusion.
    #[serde(rename = "kf-dfpc")]
    KfDfpcCeec,
    /// Hybrid consensus on measurements and on predicted information.
    #[serde(rename = "kf-hcmci")]
    KfHcmci,
    /// Hybrid consensus plus estimate/covariance re-fusion.
    #[serde(rename = "ha-dkf")]
    HaDkf,
}

impl Algorithm {
    /// Every variant, in the order used for multi-algorithm outputs.
    pub const ALL: [Algorithm; 4] = [
        Algorithm::DkfCe,
        Algorithm::KfDfpcCeec,
        Algorithm::KfHcmci,
        Algorithm::HaDkf,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Algorithm::DkfCe => "dkf",
            Algorithm::KfDfpcCeec => "kf-dfpc",
            Algorithm::KfHcmci => "kf-hcmci",
            Algorithm::HaDkf => "ha-dkf",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algorithm> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.slug() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown algorithm '{s}', expected one of dkf, kf-dfpc, kf-hcmci, ha-dkf"
                ))
            })
    }
}

/// One node's broadcast for a round: predicted pair, updated pair, own
/// measurement, and measurement information matrix. The `upd` field only
/// becomes meaningful in the second phase of the round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeMessage {
    pub pred: InfoPair,
    pub upd: InfoPair,
    pub y: Vec2,
    pub u: Mat2,
}

/// Per-node filter memory carried between rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeFilterState {
    /// Predicted pair for the upcoming round.
    pub pred: InfoPair,
    /// Updated pair from the last completed round; its mean is what an
    /// actuating node applies to its oscillator.
    pub upd: InfoPair,
    /// Process noise information matrix `W = Q^{-1}`.
    pub process_info: Mat2,
}

/// Weighted message list a node consumes in one round. The node's own message
/// comes first, then neighbors in ascending node order.
pub type Inbox = [(f64, NodeMessage)];

/// Output of the measurement-consensus sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmTerm {
    pub delta_mu: Vec2,
    pub delta_omega: Mat2,
}

/// Which mean the estimate re-fusion uses. The covariance line scales each
/// neighbor covariance by the squared weight either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CeecMean {
    /// Convex combination of the neighborhood means.
    #[default]
    Weighted,
    /// Plain unweighted sum of the neighborhood means.
    Unweighted,
}

/// Consensus on measurements: weighted sums of the scaled measurements and of
/// the measurement information matrices.
pub fn cm_step(inbox: &Inbox) -> Result<CmTerm> {
    if inbox.is_empty() {
        return Err(Error::EmptyInbox);
    }
    let mut delta_mu = Vec2::ZERO;
    let mut delta_omega = Mat2::ZERO;
    for (w, msg) in inbox {
        delta_mu = delta_mu + (msg.u * msg.y) * *w;
        delta_omega = delta_omega + msg.u * *w;
    }
    Ok(CmTerm {
        delta_mu,
        delta_omega,
    })
}

/// Consensus on information: convex combination of the neighborhood's
/// predicted information pairs.
pub fn ci_step(inbox: &Inbox) -> Result<InfoPair> {
    if inbox.is_empty() {
        return Err(Error::EmptyInbox);
    }
    let mut mu = Vec2::ZERO;
    let mut omega = Mat2::ZERO;
    for (w, msg) in inbox {
        mu = mu + msg.pred.mu * *w;
        omega = omega + msg.pred.omega * *w;
    }
    Ok(InfoPair::new(omega, mu))
}

/// Additive correction of the information consensus by the measurement
/// consensus.
pub fn cm_ci_correction(ci: InfoPair, cm: CmTerm) -> InfoPair {
    InfoPair::new(ci.omega + cm.delta_omega, ci.mu + cm.delta_mu)
}

/// Re-fusion of updated estimates across a neighborhood: the mean combines
/// the members' updated means (see [`CeecMean`]) and the covariance is the
/// squared-weight combination of their updated covariances.
pub fn ceec_step<I>(members: I, mean_form: CeecMean) -> Result<MomentPair>
where
    I: IntoIterator<Item = (f64, InfoPair)>,
{
    let mut mean = Vec2::ZERO;
    let mut cov = Mat2::ZERO;
    let mut seen = false;
    for (w, pair) in members {
        seen = true;
        let v = pair.omega.inverse()?;
        let m = v * pair.mu;
        let mean_w = match mean_form {
            CeecMean::Weighted => w,
            CeecMean::Unweighted => 1.0,
        };
        mean = mean + m * mean_w;
        cov = cov + v * (w * w);
    }
    if !seen {
        return Err(Error::EmptyInbox);
    }
    Ok(MomentPair::new(mean, cov.symmetrized()))
}

/// Shared prediction core over an updated information matrix and mean.
fn predict_core(omega_upd: Mat2, mean_upd: Vec2, w_proc: Mat2) -> Result<InfoPair> {
    let inner = (omega_upd + w_proc).inverse()?;
    let omega = (w_proc - w_proc * inner * w_proc).symmetrized();
    Ok(InfoPair::new(omega, omega * mean_upd))
}

/// One prediction step in information form.
pub fn predict(upd: InfoPair, w_proc: Mat2) -> Result<InfoPair> {
    predict_core(upd.omega, upd.mean()?, w_proc)
}

/// Filter state from a node's first measurement: the measurement becomes the
/// posterior, and one prediction primes the next round.
pub fn init_filter(first_y: Vec2, first_u: Mat2, w_proc: Mat2) -> Result<NodeFilterState> {
    let upd = InfoPair::new(first_u, first_u * first_y);
    Ok(NodeFilterState {
        pred: predict(upd, w_proc)?,
        upd,
        process_info: w_proc,
    })
}

/// Phase-1 work: compute the node's updated pair from the first message
/// exchange. The consensus algorithms sweep the whole inbox; the local-update
/// algorithms correct the node's own prediction by its own measurement.
pub fn local_update(algo: Algorithm, inbox: &Inbox) -> Result<InfoPair> {
    if inbox.is_empty() {
        return Err(Error::EmptyInbox);
    }
    match algo {
        Algorithm::HaDkf | Algorithm::KfHcmci => {
            Ok(cm_ci_correction(ci_step(inbox)?, cm_step(inbox)?))
        }
        Algorithm::DkfCe | Algorithm::KfDfpcCeec => {
            let own = &inbox[0].1;
            Ok(InfoPair::new(
                own.pred.omega + own.u,
                own.pred.mu + own.u * own.y,
            ))
        }
    }
}

/// Phase-2 work: fuse the neighborhood's updated pairs (where the algorithm
/// calls for it) and predict. `own_upd` stands in for the first inbox entry's
/// `upd` field, which is ignored.
pub fn fuse_and_predict(
    algo: Algorithm,
    own_upd: InfoPair,
    process_info: Mat2,
    inbox: &Inbox,
) -> Result<NodeFilterState> {
    if inbox.is_empty() {
        return Err(Error::EmptyInbox);
    }
    let (upd, mean) = match algo {
        Algorithm::HaDkf | Algorithm::KfDfpcCeec => {
            let members = std::iter::once((inbox[0].0, own_upd))
                .chain(inbox[1..].iter().map(|(w, msg)| (*w, msg.upd)));
            let fused = ceec_step(members, CeecMean::Weighted)?;
            (fused.to_information()?, fused.mean)
        }
        Algorithm::KfHcmci => (own_upd, own_upd.mean()?),
        Algorithm::DkfCe => {
            let mut mean = own_upd.mean()? * inbox[0].0;
            for (w, msg) in &inbox[1..] {
                mean = mean + msg.upd.mean()? * *w;
            }
            (InfoPair::new(own_upd.omega, own_upd.omega * mean), mean)
        }
    };
    Ok(NodeFilterState {
        pred: predict_core(upd.omega, mean, process_info)?,
        upd,
        process_info,
    })
}

/// One whole round for one node, given an inbox whose neighbor entries
/// already carry phase-2 updated pairs.
pub fn step_node(algo: Algorithm, state: &NodeFilterState, inbox: &Inbox) -> Result<NodeFilterState> {
    let own_upd = local_update(algo, inbox)?;
    fuse_and_predict(algo, own_upd, state.process_info, inbox)
}
