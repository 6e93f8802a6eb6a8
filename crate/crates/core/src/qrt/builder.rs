use super::{ChannelDecl, Qrt, QrtError, SystemDecl};
use crate::config::Tolerances;
use crate::linalg::{DensityMatrix, KrausChannel};

/// Incremental construction of a [`Qrt`] from ids and matrices.
#[derive(Debug, Clone, Default)]
pub struct QrtBuilder {
    systems: Vec<SystemDecl>,
    channels: Vec<ChannelDecl>,
    trivial: Option<String>,
    tol: Tolerances,
}

impl QrtBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    /// Declares the dimension-1 system with its single state `one`.
    pub fn trivial(mut self, id: &str) -> Self {
        self.systems.push(SystemDecl {
            id: id.to_owned(),
            dim: 1,
            states: vec![("one".to_owned(), DensityMatrix::scalar_one())],
        });
        self.trivial = Some(id.to_owned());
        self
    }

    pub fn system(mut self, id: &str, dim: usize, states: Vec<(&str, DensityMatrix)>) -> Self {
        self.systems.push(SystemDecl {
            id: id.to_owned(),
            dim,
            states: states.into_iter().map(|(n, s)| (n.to_owned(), s)).collect(),
        });
        self
    }

    pub fn channel(mut self, id: &str, from: &str, to: &str, channel: KrausChannel) -> Self {
        self.channels.push(ChannelDecl {
            id: id.to_owned(),
            from: from.to_owned(),
            to: to.to_owned(),
            channel,
        });
        self
    }

    /// Preparation `trivial -> to` of one state of `to`.
    pub fn prepare(self, id: &str, to: &str, state: &str) -> Self {
        let trivial = self.trivial.clone().expect("declare the trivial system before preparations");
        let rho = self
            .systems
            .iter()
            .find(|s| s.id == to)
            .and_then(|s| s.states.iter().find(|(n, _)| n == state))
            .map(|(_, r)| r.clone())
            .unwrap_or_else(|| panic!("unknown state {to}.{state}"));
        self.channel(id, &trivial, to, KrausChannel::preparation(&rho))
    }

    /// Builds with identity insertion; composition closure is not applied.
    pub fn build(self) -> Result<Qrt, QrtError> {
        Qrt::new(self.systems, self.channels, self.trivial, self.tol)
    }

    /// Builds and closes under composition.
    pub fn build_complete(self) -> Result<Qrt, QrtError> {
        super::complete_composition(&self.build()?)
    }
}
