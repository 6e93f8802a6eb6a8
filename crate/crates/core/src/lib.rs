//! Finite quantum resource theories, the functors into variable-domain S4
//! Kripke models, and executable checks for the correspondence theorems.

pub mod config;
pub mod kripke;
pub mod linalg;
pub mod qrt;
pub mod relation;
pub mod logic;
pub mod translate;
pub mod smc;
pub mod format;
pub mod generate;
pub mod corpus;
pub mod harness;

pub use config::Tolerances;
pub use format::{FormatError, ModelFile, QrtFile, RecordFile};
pub use generate::{GenerateError, GeneratorConfig};
pub use harness::{run_theorems, HarnessOptions, Injected, Section, Status, TheoremsReport};
pub use kripke::{KripkeError, KripkeModel, StarredModel};
pub use linalg::{ComplexMatrix, DensityMatrix, KrausChannel, LinalgError};
pub use logic::{Formula, LogicError};
pub use qrt::{Qrt, QrtBuilder, QrtError};
pub use relation::Relation;
pub use smc::{Smc, SmcError};
pub use translate::{TranslateError, TranslationRecord};
