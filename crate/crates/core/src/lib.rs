//! Conjugacy classes, centralizers and explicit conjugating elements in
//! finite classical groups (GL, SL, Sp, U, SU, O^ε, SO^ε, Ω^ε) over small
//! finite fields, with a built-in brute-force oracle for verification at
//! desk scale.
//!
//! Module layout:
//! - [`field`], [`poly`]: exact arithmetic in `F_q`/`F_{q²}`, bar involution,
//!   dual polynomials, Φ-classification.
//! - [`matrix`]: dense matrices, elementary divisors, generalized Jordan
//!   forms, Jordan decomposition, GL-conjugators, extension-field embeddings.
//! - [`forms`]: sesquilinear/quadratic forms, congruence standardization,
//!   Witt type, Wall form and spinor norm.
//! - [`groups`]: group descriptors, orders, membership, class admissibility,
//!   standard semisimple blocks.
//! - [`classes`]: complete class listings with splitting for SL/SU/SO/Ω.
//! - [`centralizers`]: centralizer structure, orders and generating sets.
//! - [`conjugacy`]: conjugacy decision and explicit conjugating elements.
//! - [`oracle`]: brute-force enumeration, class partitions, centralizers.

pub mod centralizers;
pub mod classes;
pub mod conjugacy;
pub mod error;
pub mod field;
pub mod forms;
pub mod groups;
pub mod matrix;
pub mod oracle;
pub mod poly;

pub use centralizers::{
    ambient_centralizer_order, ambient_centralizer_structure, centralizer,
    centralizer_generators, class_size_and_centralizer, gl_centralizer,
    gl_centralizer_generators, gl_unipotent_centralizer, gl_unipotent_centralizer_order,
    sl_centralizer, u_unipotent_centralizer_order, unipotent_centralizer,
    CentralizerDescription,
};
pub use classes::{
    class_invariant, list_classes, semisimple_classes, unipotent_classes, ClassLabel, ClassRep,
    DivisorLabel, UnipotentLabel,
};
pub use conjugacy::{
    class_count, conjugacy_certificate, conjugator, is_conjugate, is_conjugate_brute,
    same_class_label, unipotent_conjugator, ConjugacyCertificate,
};
pub use error::{Error, Result};
pub use field::{Fel, Field, SubfieldEmbedding};
pub use forms::{
    congruence_transform, form_type, is_isometry, spinor_norm, standardize, wall_form, Form,
    FormKind, TypeTag, WallFormData,
};
pub use groups::{
    contains, gl_class_admissible, group_order, standard_semisimple_block, Family, GroupSpec,
    MembershipReport,
};
pub use oracle::{
    brute_centralizer, brute_classes, brute_conjugator, enumerate_group,
    enumerate_group_with_cap, EnumeratedGroup, DEFAULT_MAX_ORDER,
};
pub use matrix::{
    char_poly, elementary_divisors, gl_conjugator, jordan_decomposition, jordan_form, min_poly,
    ElementaryDivisorList, ExtField, MatrixFq,
};
pub use poly::{phi_classify, PhiClass, Poly};
