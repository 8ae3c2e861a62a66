//! Correct-by-construction assembly of sequentializable nets.
//!
//! Every rule consumes conclusions by position. The new conclusion takes the
//! position of the first consumed one; binary rules keep the conclusions of
//! the left operand first.

use crate::formula::{EdgeLabel, Formula};
use crate::net::{EdgeId, LinkKind, Net};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("conclusion index {index} out of range (net has {len} conclusions)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("conclusion index {0} used twice")]
    RepeatedIndex(usize),
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error("promotion needs exactly one non-flat conclusion, found {0}")]
    Promotion(usize),
}

pub fn daimon() -> Net {
    Net::new()
}

/// Axiom on `A⊥, A`.
pub fn ax(a: Formula) -> Net {
    let mut n = Net::new();
    let l = n.add_formula_edge(a.dual());
    let r = n.add_formula_edge(a);
    n.add_link(LinkKind::Axiom, vec![], vec![l, r], None);
    n.set_conclusions(vec![l, r]);
    n
}

pub fn one_rule() -> Net {
    let mut n = Net::new();
    let e = n.add_formula_edge(Formula::One);
    n.add_link(LinkKind::One, vec![], vec![e], None);
    n.set_conclusions(vec![e]);
    n
}

/// Disjoint union, conclusions of `a` first.
pub fn mix(a: &Net, b: &Net) -> Net {
    let mut n = a.clone();
    n.absorb(b, None);
    n
}

fn conclusion(n: &Net, i: usize) -> Result<EdgeId, BuildError> {
    n.conclusions()
        .get(i)
        .copied()
        .ok_or(BuildError::IndexOutOfRange { index: i, len: n.conclusions().len() })
}

fn plain(n: &Net, i: usize) -> Result<(EdgeId, Formula), BuildError> {
    let e = conclusion(n, i)?;
    match n.label(e) {
        EdgeLabel::Plain(f) => Ok((e, f.clone())),
        EdgeLabel::Flat(f) => Err(BuildError::LabelMismatch(format!(
            "conclusion {i} is the flat label %{f}, a formula is required"
        ))),
    }
}

/// Removes the conclusions at `consumed` and puts `new` (if any) at the
/// position of the smallest of them.
fn splice(n: &mut Net, consumed: &[usize], new: Option<EdgeId>) {
    let first = consumed.iter().copied().min();
    let old = n.conclusions().to_vec();
    let mut out = Vec::with_capacity(old.len());
    for (k, e) in old.into_iter().enumerate() {
        if Some(k) == first {
            out.extend(new);
        } else if !consumed.contains(&k) {
            out.push(e);
        }
    }
    if first.is_none() {
        out.extend(new);
    }
    n.set_conclusions(out);
}

fn distinct(indices: &[usize]) -> Result<(), BuildError> {
    for (k, i) in indices.iter().enumerate() {
        if indices[..k].contains(i) {
            return Err(BuildError::RepeatedIndex(*i));
        }
    }
    Ok(())
}

pub fn cut_rule(a: &Net, i: usize, b: &Net, j: usize) -> Result<Net, BuildError> {
    let (_, fa) = plain(a, i)?;
    let (_, fb) = plain(b, j)?;
    if fb != fa.dual() {
        return Err(BuildError::LabelMismatch(format!("cannot cut {fa} against {fb}")));
    }
    let mut n = mix(a, b);
    let (ea, eb) = (n.conclusions()[i], n.conclusions()[a.conclusions().len() + j]);
    n.add_link(LinkKind::Cut, vec![ea, eb], vec![], None);
    splice(&mut n, &[i, a.conclusions().len() + j], None);
    Ok(n)
}

pub fn tensor_rule(a: &Net, i: usize, b: &Net, j: usize) -> Result<Net, BuildError> {
    let (_, fa) = plain(a, i)?;
    let (_, fb) = plain(b, j)?;
    let mut n = mix(a, b);
    let (ea, eb) = (n.conclusions()[i], n.conclusions()[a.conclusions().len() + j]);
    let c = n.add_formula_edge(Formula::tensor(fa, fb));
    n.add_link(LinkKind::Tensor, vec![ea, eb], vec![c], None);
    splice(&mut n, &[i, a.conclusions().len() + j], Some(c));
    Ok(n)
}

/// Par with left premise conclusion `i` and right premise conclusion `j`.
pub fn par_rule(a: &Net, i: usize, j: usize) -> Result<Net, BuildError> {
    distinct(&[i, j])?;
    let (ei, fi) = plain(a, i)?;
    let (ej, fj) = plain(a, j)?;
    let mut n = a.clone();
    let c = n.add_formula_edge(Formula::par(fi, fj));
    n.add_link(LinkKind::Par, vec![ei, ej], vec![c], None);
    splice(&mut n, &[i, j], Some(c));
    Ok(n)
}

/// Adds a bottom link; its conclusion goes last.
pub fn bottom_rule(a: &Net) -> Net {
    let mut n = a.clone();
    let c = n.add_formula_edge(Formula::Bottom);
    n.add_link(LinkKind::Bottom, vec![], vec![c], None);
    n.conclusions_mut().push(c);
    n
}

pub fn flat_rule(a: &Net, i: usize) -> Result<Net, BuildError> {
    let (e, f) = plain(a, i)?;
    let mut n = a.clone();
    let c = n.add_edge(EdgeLabel::Flat(f));
    n.add_link(LinkKind::Flat, vec![e], vec![c], None);
    splice(&mut n, &[i], Some(c));
    Ok(n)
}

/// Why-not link on the conclusions at `indices`, all labelled `♭body`.
/// With no indices this is a weakening on `?body`, whose conclusion goes last.
pub fn whynot_rule(a: &Net, indices: &[usize], body: &Formula) -> Result<Net, BuildError> {
    distinct(indices)?;
    let mut prem = Vec::new();
    for &i in indices {
        let e = conclusion(a, i)?;
        match a.label(e) {
            EdgeLabel::Flat(f) if f == body => prem.push(e),
            other => {
                return Err(BuildError::LabelMismatch(format!(
                    "why-not on %{body} applied to conclusion {i} labelled {other}"
                )))
            }
        }
    }
    let mut n = a.clone();
    let c = n.add_formula_edge(Formula::why_not(body.clone()));
    n.add_link(LinkKind::WhyNot, prem, vec![c], None);
    splice(&mut n, indices, Some(c));
    Ok(n)
}

pub fn paragraph_rule(a: &Net, i: usize) -> Result<Net, BuildError> {
    let (e, f) = plain(a, i)?;
    let mut n = a.clone();
    let c = n.add_formula_edge(Formula::paragraph(f));
    n.add_link(LinkKind::Paragraph, vec![e], vec![c], None);
    splice(&mut n, &[i], Some(c));
    Ok(n)
}

/// Encloses `a` in a box. Conclusion `principal` (the only non-flat one)
/// becomes `!A`; every other conclusion gets a pax link.
pub fn promotion(a: &Net, principal: usize) -> Result<Net, BuildError> {
    let (_, body) = plain(a, principal)?;
    let non_flat = a.conclusions().iter().filter(|&&e| !a.label(e).is_flat()).count();
    if non_flat != 1 {
        return Err(BuildError::Promotion(non_flat));
    }
    let mut n = Net::new();
    let b = n.add_box(crate::net::LinkId(0), Vec::new(), None);
    n.absorb(a, Some(b));
    let inner = n.conclusions().to_vec();
    let mut out = Vec::with_capacity(inner.len());
    let mut aux = Vec::new();
    let mut oc = None;
    for (k, e) in inner.into_iter().enumerate() {
        if k == principal {
            let c = n.add_formula_edge(Formula::of_course(body.clone()));
            oc = Some(n.add_link(LinkKind::OfCourse, vec![e], vec![c], None));
            out.push(c);
        } else {
            let c = n.add_edge(n.label(e).clone());
            aux.push(n.add_link(LinkKind::Pax, vec![e], vec![c], None));
            out.push(c);
        }
    }
    let nb = n.box_mut(b);
    nb.principal = oc.expect("principal conclusion present");
    nb.auxiliaries = aux;
    n.set_conclusions(out);
    Ok(n)
}

/// The dereliction net, conclusion `?A⊥ ⅋ A`.
pub fn dereliction(a: Formula) -> Net {
    let n = flat_rule(&ax(a.clone()), 0).unwrap();
    let n = whynot_rule(&n, &[0], &a.dual()).unwrap();
    par_rule(&n, 0, 1).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::validate;

    fn labels(n: &Net) -> Vec<String> {
        n.conclusion_labels().iter().map(|l| l.to_string()).collect()
    }

    #[test]
    fn base_rules() {
        assert_eq!(daimon().num_links(), 0);
        assert_eq!(labels(&ax(Formula::atom("X"))), ["X^", "X"]);
        assert_eq!(labels(&one_rule()), ["1"]);
        let m = mix(&ax(Formula::atom("X")), &ax(Formula::atom("Y")));
        assert_eq!(m.conclusions().len(), 4);
        assert!(validate(&m).is_valid());
    }

    #[test]
    fn identity_and_dereliction() {
        let id = par_rule(&ax(Formula::atom("X")), 0, 1).unwrap();
        assert_eq!(labels(&id), ["(X^ @ X)"]);
        let d = dereliction(Formula::atom("X"));
        assert_eq!(labels(&d), ["(?X^ @ X)"]);
        assert!(validate(&d).is_valid());
    }

    #[test]
    fn promotion_builds_box() {
        let n = flat_rule(&ax(Formula::atom("X")), 0).unwrap();
        let p = promotion(&n, 1).unwrap();
        assert_eq!(labels(&p), ["%X^", "!X"]);
        assert_eq!(p.num_boxes(), 1);
        let (_, b) = p.boxes().next().unwrap();
        assert_eq!(b.auxiliaries.len(), 1);
        assert_eq!(p.link(b.principal).kind, LinkKind::OfCourse);
        assert!(validate(&p).is_valid(), "{}", validate(&p));
        // nested promotion
        let q = whynot_rule(&p, &[0], &Formula::dual_atom("X")).unwrap();
        let q = flat_rule(&q, 0).unwrap();
        let q = promotion(&q, 1).unwrap();
        assert!(validate(&q).is_valid(), "{}", validate(&q));
        assert_eq!(crate::graph::max_depth(&q), 2);
    }

    #[test]
    fn rule_errors() {
        let a = ax(Formula::atom("X"));
        assert!(matches!(cut_rule(&a, 1, &a, 1), Err(BuildError::LabelMismatch(_))));
        assert!(matches!(par_rule(&a, 0, 2), Err(BuildError::IndexOutOfRange { .. })));
        assert!(matches!(par_rule(&a, 0, 0), Err(BuildError::RepeatedIndex(0))));
        let m = mix(&a, &a);
        assert!(matches!(promotion(&m, 0), Err(BuildError::Promotion(4))));
        assert!(whynot_rule(&a, &[0], &Formula::atom("X")).is_err());
    }

    #[test]
    fn weakening_has_no_premises() {
        let w = whynot_rule(&one_rule(), &[], &Formula::atom("X")).unwrap();
        assert_eq!(labels(&w), ["1", "?X"]);
        let (_, l) = w.links().find(|(_, l)| l.kind == LinkKind::WhyNot).unwrap();
        assert!(l.premises.is_empty());
        assert!(validate(&w).is_valid());
    }

    #[test]
    fn cut_and_tensor_positions() {
        let a = ax(Formula::atom("X"));
        let c = cut_rule(&a, 1, &a, 0).unwrap();
        assert_eq!(labels(&c), ["X^", "X"]);
        let t = tensor_rule(&a, 1, &a, 0).unwrap();
        assert_eq!(labels(&t), ["X^", "(X * X^)", "X"]);
        assert!(validate(&t).is_valid());
    }
}
