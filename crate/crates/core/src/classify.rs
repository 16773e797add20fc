//! Classification by invariants: a free involution of `H_g` is `I_g`, and a
//! non-free one is `L_g^{n,m}` where `n` and `m` count its fixed arcs and
//! circles.

use thiserror::Error;

use crate::canonical::CanonicalForm;
use crate::invariants::{fixed_set, genus, is_free};
use crate::model::{serialize_model, Model};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    /// The invariants fall outside every class. Only reachable through a
    /// model-validation bug; carries the offending model text.
    #[error("invariants violate the classification ({reason})\n{dump}")]
    TheoremViolation { reason: String, dump: String },
}

pub fn classify(m: &Model) -> Result<CanonicalForm, ClassifyError> {
    let g = genus(m);
    let violation = |reason: String| ClassifyError::TheoremViolation {
        reason,
        dump: serialize_model(m),
    };
    if is_free(m) {
        if g % 2 == 0 {
            return Err(violation(format!("free involution on even genus {g}")));
        }
        return Ok(CanonicalForm::Free { n: (g - 1) / 2 });
    }
    let fixed = fixed_set(m);
    let (n, mc) = (fixed.n_arcs, fixed.m_circles);
    if n + 2 * mc == 0 {
        return Err(violation("non-free model with empty fixed set".into()));
    }
    if n + 2 * mc > g + 1 {
        return Err(violation(format!("n + 2m = {} exceeds g + 1 = {}", n + 2 * mc, g + 1)));
    }
    if (n + g + 1) % 2 != 0 {
        return Err(violation(format!("n = {n} has the wrong parity for g = {g}")));
    }
    Ok(CanonicalForm::NonFree {
        n,
        m: mc,
        l: (g + 1 - n - 2 * mc) / 2,
    })
}

/// Equivalence of the encoded involutions. Coarser than spine isomorphism.
pub fn same_class(a: &Model, b: &Model) -> Result<bool, ClassifyError> {
    Ok(classify(a)? == classify(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{build_free, build_nonfree};
    use crate::model::parse_model;

    fn model(body: &str) -> Model {
        parse_model(&format!("involution-graph v1\n{body}")).unwrap()
    }

    #[test]
    fn solid_torus_involutions() {
        let inverted = model("vertex v\nedge e v v\nemap e e inverted\n");
        assert_eq!(classify(&inverted).unwrap().display(), "L_1^{2,0}");
        let axial = model("vertex v\nedge e v v\n");
        assert_eq!(classify(&axial).unwrap().display(), "L_1^{0,1}");
        let square = model(
            "vertex a\nvertex b\nvertex c\nvertex d\nedge e1 a b\nedge e2 b c\nedge e3 c d\nedge e4 a d\nvmap a c\nvmap b d\nemap e1 e3 fwd\nemap e2 e4 rev\n",
        );
        assert_eq!(classify(&square).unwrap(), CanonicalForm::Free { n: 0 });
    }

    #[test]
    fn bouquets_of_inverted_loops_are_hyperelliptic() {
        for g in 0..7 {
            let mut body = String::from("vertex v\n");
            for k in 0..g {
                body.push_str(&format!("edge e{k} v v\nemap e{k} e{k} inverted\n"));
            }
            let c = classify(&model(&body)).unwrap();
            assert_eq!(c, CanonicalForm::NonFree { n: g + 1, m: 0, l: 0 });
        }
    }

    #[test]
    fn builder_round_trip() {
        assert_eq!(classify(&build_free(5)).unwrap().display(), "I_11");
        assert_eq!(
            classify(&build_nonfree(1, 1, 1).unwrap()).unwrap(),
            CanonicalForm::NonFree { n: 1, m: 1, l: 1 }
        );
    }

    #[test]
    fn same_class_is_coarser_than_isomorphism() {
        let bouquet = model("vertex v\nedge e v v\nemap e e inverted\n");
        let chain = build_nonfree(2, 0, 0).unwrap();
        assert!(same_class(&bouquet, &chain).unwrap());
        let axial = model("vertex v\nedge e v v\n");
        assert!(!same_class(&axial, &bouquet).unwrap());
        assert!(same_class(&axial, &axial).unwrap());
    }
}
