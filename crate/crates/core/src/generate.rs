//! Seeded random families of QRTs, Kripke models and formulas.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::Tolerances;
use crate::kripke::KripkeModel;
use crate::linalg::random::{random_channel, random_density};
use crate::linalg::{apply, trace_distance, ComplexMatrix, DensityMatrix, KrausChannel};
use crate::logic::Formula;
use crate::qrt::{complete_composition, validate_qrt, ChannelDecl, Qrt, QrtError, SystemDecl};
use crate::relation::Relation;

/// Minimum trace distance between two generated states of one system.
const STATE_SEPARATION: f64 = 0.1;
/// Draws per ordered system pair before the pair is left without a channel.
const ATTEMPTS_PER_PAIR: usize = 8;

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("invalid generator config: {0}")]
    Config(String),
    #[error("resampling budget of {0} draws exhausted")]
    BudgetExhausted(usize),
    #[error(transparent)]
    Qrt(#[from] QrtError),
    #[error("generated QRT failed validation:\n{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorConfig {
    pub seed: u64,
    /// Number of QRTs in the family.
    pub count: usize,
    /// Upper bound on systems per QRT, the trivial system included.
    pub n_systems: usize,
    pub dims: Vec<usize>,
    pub states_per_system: usize,
    /// Probability that an ordered system pair receives a channel.
    pub channel_density: f64,
    pub ensure_trivial: bool,
    /// Upper bound on named states per QRT, the trivial state included.
    pub max_total_states: Option<usize>,
    /// Total channel draws allowed per QRT.
    pub resample_budget: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 1,
            count: 20,
            n_systems: 4,
            dims: vec![1, 2, 3],
            states_per_system: 3,
            channel_density: 0.5,
            ensure_trivial: true,
            max_total_states: None,
            resample_budget: 10_000,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), GenerateError> {
        let bad = |m: &str| Err(GenerateError::Config(m.to_owned()));
        if !(1..=4).contains(&self.n_systems) {
            return bad("n_systems must be between 1 and 4");
        }
        if self.dims.is_empty() || self.dims.iter().any(|d| !(1..=3).contains(d)) {
            return bad("dims must be a non-empty subset of {1, 2, 3}");
        }
        if !(1..=4).contains(&self.states_per_system) {
            return bad("states_per_system must be between 1 and 4");
        }
        if !(0.0..=1.0).contains(&self.channel_density) {
            return bad("channel_density must lie in [0, 1]");
        }
        if self.max_total_states.is_some_and(|m| m < 2) {
            return bad("max_total_states must be at least 2");
        }
        Ok(())
    }
}

/// Generates `config.count` valid, composition-closed QRTs from `config.seed`.
pub fn generate_family(config: &GeneratorConfig, tol: Tolerances) -> Result<Vec<Qrt>, GenerateError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.count).map(|_| generate_qrt(config, tol, &mut rng)).collect()
}

/// One random QRT drawn from `rng`.
pub fn generate_qrt<R: Rng + ?Sized>(config: &GeneratorConfig, tol: Tolerances, rng: &mut R) -> Result<Qrt, GenerateError> {
    let nontrivial_dims: Vec<usize> = config.dims.iter().copied().filter(|&d| d > 1).collect();
    let with_trivial = config.ensure_trivial || (config.dims.contains(&1) && (nontrivial_dims.is_empty() || rng.random_bool(0.5)));
    let max_nontrivial = config.n_systems - usize::from(with_trivial);
    let n_nontrivial = match (nontrivial_dims.is_empty(), max_nontrivial) {
        (true, _) | (_, 0) => 0,
        (false, m) => rng.random_range(1..=m),
    };

    let mut systems = Vec::new();
    if with_trivial {
        systems.push(SystemDecl {
            id: "C".into(),
            dim: 1,
            states: vec![("one".into(), DensityMatrix::scalar_one())],
        });
    }
    let mut state_budget = config
        .max_total_states
        .map_or(usize::MAX, |m| m - usize::from(with_trivial));
    for k in 0..n_nontrivial {
        let dim = *nontrivial_dims.choose(rng).expect("non-empty");
        let reserve = n_nontrivial - k - 1;
        let cap = config.states_per_system.min(state_budget.saturating_sub(reserve)).max(1);
        let n_states = rng.random_range(1..=cap);
        state_budget = state_budget.saturating_sub(n_states);
        systems.push(SystemDecl {
            id: format!("S{k}"),
            dim,
            states: random_states(dim, n_states, rng)
                .into_iter()
                .enumerate()
                .map(|(i, s)| (format!("s{i}"), s))
                .collect(),
        });
    }

    let mut channels = Vec::new();
    let mut draws = 0usize;
    for a in 0..systems.len() {
        for b in 0..systems.len() {
            if (a == b && systems[a].dim == 1) || !rng.random_bool(config.channel_density) {
                continue;
            }
            for _ in 0..ATTEMPTS_PER_PAIR {
                draws += 1;
                if draws > config.resample_budget {
                    return Err(GenerateError::BudgetExhausted(config.resample_budget));
                }
                let candidate = random_candidate(&systems[a], &systems[b], rng);
                if maps_named_states(&candidate, &systems[a], &systems[b], &tol) {
                    channels.push(ChannelDecl {
                        id: format!("c{}", channels.len()),
                        from: systems[a].id.clone(),
                        to: systems[b].id.clone(),
                        channel: candidate,
                    });
                    break;
                }
            }
        }
    }
    let trivial = with_trivial.then(|| "C".to_owned());
    let q = complete_composition(&Qrt::new(systems, channels, trivial, tol)?)?;
    let report = validate_qrt(&q);
    if !report.is_valid() {
        return Err(GenerateError::Invalid(report.to_string()));
    }
    Ok(q)
}

fn random_states<R: Rng + ?Sized>(dim: usize, n: usize, rng: &mut R) -> Vec<DensityMatrix> {
    let mut out: Vec<DensityMatrix> = Vec::with_capacity(n);
    while out.len() < n {
        let candidate = match rng.random_range(0..3) {
            0 => DensityMatrix::basis(dim, rng.random_range(0..dim)),
            1 => DensityMatrix::maximally_mixed(dim),
            _ => random_density(dim, rng.random_range(1..=dim), rng),
        };
        let separated = out
            .iter()
            .all(|s| trace_distance(s, &candidate).is_ok_and(|d| d > STATE_SEPARATION));
        if separated {
            out.push(candidate);
        }
    }
    out
}

fn random_candidate<R: Rng + ?Sized>(from: &SystemDecl, to: &SystemDecl, rng: &mut R) -> KrausChannel {
    let named = |rng: &mut R| to.states.choose(rng).expect("systems have states").1.clone();
    if from.dim == 1 {
        return KrausChannel::preparation(&named(rng));
    }
    if to.dim == 1 {
        return KrausChannel::trace_out(from.dim);
    }
    match rng.random_range(0..8) {
        0..=2 => KrausChannel::replacement(from.dim, &named(rng)),
        3..=4 => {
            let outputs: Vec<DensityMatrix> = (0..from.dim).map(|_| named(rng)).collect();
            KrausChannel::measure_prepare(from.dim, &outputs).expect("outputs share a dimension")
        }
        5..=6 if from.dim == to.dim => {
            let mut perm: Vec<usize> = (0..from.dim).collect();
            perm.shuffle(rng);
            let mut u = ComplexMatrix::zeros(from.dim, from.dim);
            for (i, &p) in perm.iter().enumerate() {
                u.set(p, i, 1.0.into());
            }
            KrausChannel::unitary(u).expect("permutation matrices are unitary")
        }
        _ => random_channel(from.dim, to.dim, rng.random_range(1..=3), rng),
    }
}

/// Every named state of `from` lands within `eps_match` of exactly one named state of `to`.
fn maps_named_states(c: &KrausChannel, from: &SystemDecl, to: &SystemDecl, tol: &Tolerances) -> bool {
    from.states.iter().all(|(_, rho)| {
        let Ok(image) = apply(c, rho, tol) else { return false };
        to.states
            .iter()
            .filter(|(_, s)| trace_distance(&image, s).is_ok_and(|d| d <= tol.eps_match))
            .count()
            == 1
    })
}

/// Shuffles systems and states and renames every system.
pub fn random_relabeling<R: Rng + ?Sized>(q: &Qrt, rng: &mut R) -> Result<Qrt, QrtError> {
    let mut order: Vec<usize> = (0..q.systems().len()).collect();
    order.shuffle(rng);
    let states: Vec<Vec<usize>> = q
        .systems()
        .iter()
        .map(|s| {
            let mut v: Vec<usize> = (0..s.states.len()).collect();
            v.shuffle(rng);
            v
        })
        .collect();
    let tag = rng.random_range(0..1000u32);
    q.relabel(&order, &|id| format!("R{tag}_{id}"), &states)
}

/// Restriction to a random non-empty subset of systems; the result is a sub-QRT
/// whenever the kept systems are closed under the channels that feed them.
pub fn random_sub_qrt<R: Rng + ?Sized>(q: &Qrt, rng: &mut R) -> Result<Qrt, QrtError> {
    let ids: Vec<&str> = q.systems().iter().map(|s| s.id.as_str()).collect();
    let mut keep: Vec<&str> = ids.iter().copied().filter(|_| rng.random_bool(0.6)).collect();
    if keep.is_empty() {
        keep.push(ids.choose(rng).expect("QRTs have systems"));
    }
    if let Some(t) = q.trivial_id() {
        if !keep.contains(&t) && rng.random_bool(0.8) {
            keep.push(t);
        }
    }
    q.restrict(&keep)
}

/// A random VDML model; `s4` closes the accessibility relation into a preorder.
pub fn random_model<R: Rng + ?Sized>(max_worlds: usize, max_atoms: usize, s4: bool, rng: &mut R) -> KripkeModel {
    let n_worlds = rng.random_range(1..=max_worlds.max(1));
    let n_atoms = rng.random_range(1..=max_atoms.max(1));
    let mut access = Relation::empty(n_worlds);
    for w in 0..n_worlds {
        for u in 0..n_worlds {
            if rng.random_bool(0.35) {
                access.insert(w, u);
            }
        }
    }
    if s4 {
        access = access.reflexive_transitive_closure();
    }
    let domains = (0..n_worlds)
        .map(|_| {
            let mut d: std::collections::BTreeSet<usize> = (0..n_atoms).filter(|_| rng.random_bool(0.5)).collect();
            if d.is_empty() {
                d.insert(rng.random_range(0..n_atoms));
            }
            d
        })
        .collect();
    let interp = (0..n_atoms).map(|_| rng.random_bool(0.5)).collect();
    KripkeModel::from_indexed(
        (0..n_worlds).map(|w| format!("w{w}")).collect(),
        access,
        (0..n_atoms).map(|a| format!("p{a}")).collect(),
        domains,
        interp,
    )
    .expect("generated models are well formed")
}

/// A random formula over `atoms` of depth at most `depth`.
pub fn random_formula<R: Rng + ?Sized>(atoms: &[String], depth: usize, rng: &mut R) -> Formula {
    if depth == 0 || rng.random_bool(0.2) {
        return Formula::Atom(atoms.choose(rng).expect("at least one atom").clone());
    }
    match rng.random_range(0..4) {
        0 => Formula::not(random_formula(atoms, depth - 1, rng)),
        1 => Formula::implies(random_formula(atoms, depth - 1, rng), random_formula(atoms, depth - 1, rng)),
        2 => Formula::nec(random_formula(atoms, depth - 1, rng)),
        _ => Formula::poss(random_formula(atoms, depth - 1, rng)),
    }
}
