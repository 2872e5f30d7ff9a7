//! The bundled newform corpus.
//!
//! Two forms come as eta-quotient recipes; the rest are coefficient files of
//! external provenance. Every entry is expected to pass [`validate_hecke`].
//!
//! [`validate_hecke`]: crate::qexpansion::validate_hecke

use crate::error::Result;
use crate::qexpansion::NewformSpec;

/// `(file name, contents)` of every bundled document.
pub const DOCUMENTS: &[(&str, &str)] = &[
    ("delta.spec", include_str!("../fixtures/delta.spec")),
    ("w4_n8.spec", include_str!("../fixtures/w4_n8.spec")),
    ("w4_n13.coef", include_str!("../fixtures/w4_n13.coef")),
    ("w6_n3.coef", include_str!("../fixtures/w6_n3.coef")),
    ("w6_n5.coef", include_str!("../fixtures/w6_n5.coef")),
    ("w8_n2.coef", include_str!("../fixtures/w8_n2.coef")),
    ("w8_n3.coef", include_str!("../fixtures/w8_n3.coef")),
    ("w10_n12.coef", include_str!("../fixtures/w10_n12.coef")),
    ("w16_n1.coef", include_str!("../fixtures/w16_n1.coef")),
    ("w18_n1.coef", include_str!("../fixtures/w18_n1.coef")),
];

/// File copies of the two eta-quotient forms, used to cross-check the expansion.
pub const ETA_CROSSCHECK: &[(&str, &str)] = &[
    ("w4_n8.coef", include_str!("../fixtures/w4_n8.coef")),
    ("w12_n1.coef", include_str!("../fixtures/w12_n1.coef")),
];

pub fn all() -> Result<Vec<NewformSpec>> {
    DOCUMENTS
        .iter()
        .map(|(_, text)| NewformSpec::parse_document(text, None))
        .collect()
}

/// Look up a bundled form by file name (`"w10_n12.coef"`) or label (`"10.12.a.a"`).
pub fn by_name(name: &str) -> Option<NewformSpec> {
    let specs = all().ok()?;
    DOCUMENTS
        .iter()
        .zip(specs)
        .find(|((file, _), spec)| *file == name || spec.label == name)
        .map(|(_, spec)| spec)
}

pub fn delta() -> NewformSpec {
    by_name("delta.spec").expect("bundled Delta")
}

pub fn weight4_level8() -> NewformSpec {
    by_name("w4_n8.spec").expect("bundled 4.8.a.a")
}

pub fn weight10_level12() -> NewformSpec {
    by_name("w10_n12.coef").expect("bundled 10.12.a.a")
}
