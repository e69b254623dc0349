//! b-branchings in digraphs.
//!
//! Given a digraph `D = (V, A)` and a positive capacity `b(v)` on every
//! vertex, an arc set `F` is a *b-branching* when every vertex has indegree at
//! most `b(v)` in `F` and every nonempty vertex set `X` induces at most
//! `b(X) - 1` arcs of `F`. With `b ≡ 1` these are exactly the classical
//! branchings.
//!
//! The crate provides:
//!
//! * [`greedy`]: a multi-phase greedy algorithm for maximum-weight
//!   b-branchings, together with an integral dual certificate and an exact
//!   certificate checker;
//! * [`packing`]: feasibility and construction of disjoint b-branchings with
//!   prescribed indegrees;
//! * [`covering`]: covering an arc set by `k` b-branchings and decomposing
//!   integer points of `k` times the b-branching polytope;
//! * [`mrgreedy`]: the generalization where each vertex carries a matroid on
//!   its entering arcs;
//! * [`oracle`]: brute-force reference implementations for tiny instances.
//!
//! All arithmetic is exact. Weights are rationals stored over a common
//! denominator (see [`WeightVector`]).
//!
//! ```
//! use bbranching::{max_weight_b_branching, verify_certificate, CapacityVector, Digraph, WeightVector};
//!
//! let g = Digraph::new(3, [(0, 1), (1, 2), (2, 0)])?;
//! let b = CapacityVector::new(vec![1, 1, 1])?;
//! let w = WeightVector::from_integers(vec![5, 4, 3]);
//! let (f, cert) = max_weight_b_branching(&g, &b, &w)?;
//! assert_eq!(f.arcs().as_slice(), &[0, 1]);
//! assert!(verify_certificate(&g, &b, &w, f.arcs(), &cert).is_ok());
//! # Ok::<(), bbranching::Error>(())
//! ```

pub mod cli;
pub mod covering;
pub mod digraph;
pub mod error;
pub mod greedy;
pub mod io;
mod laminar;
pub mod matroids;
pub mod mrgreedy;
pub mod oracle;
pub mod packing;
pub mod weights;

pub use digraph::{Arc, ArcId, ArcSubset, Digraph, VertexId, VertexSet};
pub use error::{Error, Result, Witness};
pub use greedy::{max_weight_b_branching, verify_certificate, DualCertificate};
pub use matroids::{is_b_branching, BBranching, CapacityVector, DemandVector, MatroidOracle};
pub use packing::{find_disjoint_b_branchings, PackingInstance, PackingResult};
pub use weights::{Rational, WeightVector};
