//! Registered lemma suites.

pub mod free;
pub mod light;
pub mod metric;

use crate::suite::Entry;

/// Every suite, in criterion order.
pub static REGISTRY: &[Entry] = &[
    Entry::of::<metric::Whitney>(),
    Entry::of::<metric::DoubleQuotient>(),
    Entry::of::<metric::WhitneyIso>(),
    Entry::of::<metric::ChainLift>(),
    Entry::of::<metric::Uniform>(),
    Entry::of::<metric::PreCoproduct>(),
    Entry::of::<metric::Coproduct>(),
    Entry::of::<light::QuotientLight>(),
    Entry::of::<light::TwoPiece>(),
    Entry::of::<light::SubsetComponents>(),
    Entry::of::<light::Wreath>(),
    Entry::of::<light::TreeMap>(),
    Entry::of::<light::UnionMap>(),
    Entry::of::<light::QuotientTreeMap>(),
    Entry::of::<light::LipLightDef>(),
    Entry::of::<free::FreeGap>(),
    Entry::of::<free::Isometry>(),
    Entry::of::<free::SumDecomp>(),
    Entry::of::<free::QuotientDuality>(),
    Entry::of::<free::ExactNorm>(),
    Entry::of::<free::BiLipschitz>(),
    Entry::of::<light::LeafExt>(),
    Entry::of::<light::SumLight>(),
];
