//! Property tests over randomly generated well-formed TDAGs.

use proptest::prelude::*;

use tricolor_core::partition::{classify, Verdict};
use tricolor_core::transfer::{apply_op, enumerate_ops, StrategyTable, TransferOp};
use tricolor_core::{iso_equal, subsumes, unify, Color, Tdag, TdagBuilder, UnifyOutcome};

/// Deterministically interprets a stream of draws as a well-formed TDAG:
/// nodes are added in topological order, each hung under an earlier node
/// with a color the parent admits, plus optional extra (reentrant) arcs;
/// atoms go on childless nodes.
fn tdag_from_stream(stream: &[u32]) -> Tdag {
    let mut draws = stream.iter().copied().chain(std::iter::repeat(0));
    let mut draw = move |bound: usize| -> usize {
        if bound == 0 { 0 } else { draws.next().unwrap() as usize % bound }
    };
    let n = 1 + draw(6);
    let mut b = TdagBuilder::new();
    let mut colors = vec![Color::Red];
    b.node(Color::Red);
    let mut has_children = vec![false; n];
    for i in 1..n {
        let parent = draw(i);
        let child = match colors[parent] {
            Color::Red => Color::ALL[draw(3)],
            Color::Yellow => [Color::Yellow, Color::Green][draw(2)],
            Color::Green => Color::Green,
        };
        // The one arc color legal for a tree edge to a node of this color.
        let arc = match child {
            Color::Red => Color::Red,
            Color::Yellow => Color::Yellow,
            Color::Green => Color::Green,
        };
        let id = b.node(child);
        b.arc(
            tricolor_core::NodeId(parent as u32),
            &format!("f{i}"),
            id,
            arc,
        );
        colors.push(child);
        has_children[parent] = true;
    }
    // A few extra arcs from lower to higher indices (keeps acyclicity).
    let extras = draw(3);
    for e in 0..extras {
        if n < 2 {
            break;
        }
        let from = draw(n - 1);
        let to = from + 1 + draw(n - from - 1);
        let color = match (colors[from], colors[to]) {
            (Color::Red, Color::Red) => Color::ALL[draw(3)],
            (a, b) if a != Color::Green && b != Color::Green => {
                [Color::Yellow, Color::Green][draw(2)]
            }
            _ => Color::Green,
        };
        b.arc(
            tricolor_core::NodeId(from as u32),
            &format!("x{e}"),
            tricolor_core::NodeId(to as u32),
            color,
        );
        has_children[from] = true;
    }
    // Labels only on childless nodes.
    let mut nodes: Vec<_> = Vec::new();
    let built = b.root(tricolor_core::NodeId(0)).build().expect("construction is legal");
    for node in built.nodes() {
        let mut node = node.clone();
        if !has_children[node.id.index()] && draw(2) == 1 {
            node.label = Some(["*A", "*B"][draw(2)].to_string());
        }
        nodes.push(node);
    }
    Tdag::build(nodes, built.arcs().to_vec(), built.root()).expect("labels on leaves only")
}

fn stream() -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(any::<u32>(), 0..48)
}

proptest! {
    #[test]
    fn generated_tdags_are_well_formed(s in stream()) {
        let t = tdag_from_stream(&s);
        prop_assert!(t.check_well_formed().is_empty());
    }

    #[test]
    fn core_and_saturation_bound_every_tdag(s in stream()) {
        let t = tdag_from_stream(&s);
        prop_assert!(subsumes(&t.red_core(), &t));
        prop_assert!(subsumes(&t, &t.saturate()));
        prop_assert!(subsumes(&t, &t));
    }

    #[test]
    fn self_unification_is_identity(s in stream()) {
        let t = tdag_from_stream(&s);
        match unify(&t, &t) {
            UnifyOutcome::Unified(u) => prop_assert!(iso_equal(&u, &t)),
            other => prop_assert!(false, "unify(t, t) must succeed, got {other:?}"),
        }
    }

    #[test]
    fn unification_is_an_upper_bound_and_commutes(a in stream(), b in stream()) {
        let (a, b) = (tdag_from_stream(&a), tdag_from_stream(&b));
        let ab = unify(&a, &b);
        let ba = unify(&b, &a);
        match (ab, ba) {
            (UnifyOutcome::Unified(u), UnifyOutcome::Unified(v)) => {
                prop_assert!(u.check_well_formed().is_empty());
                prop_assert!(subsumes(&a, &u) && subsumes(&b, &u));
                prop_assert!(iso_equal(&u, &v));
            }
            (UnifyOutcome::Indefinite(_), UnifyOutcome::Indefinite(_)) => {}
            (UnifyOutcome::Failure(_), UnifyOutcome::Failure(_)) => {}
            (x, y) => prop_assert!(false, "outcome kind not symmetric: {x:?} vs {y:?}"),
        }
    }

    #[test]
    fn every_enumerated_op_preserves_well_formedness(s in stream()) {
        let t = tdag_from_stream(&s);
        for op in enumerate_ops(&t, &StrategyTable::shipped()) {
            let next = apply_op(&t, &op).expect("enumerated ops must apply");
            prop_assert!(next.check_well_formed().is_empty());
            if op.is_paint() {
                prop_assert!(subsumes(&next, &t), "painted must subsume original");
                prop_assert_eq!(next.element_count(), t.element_count());
            }
        }
    }

    #[test]
    fn pure_painting_terminates_within_two_steps_per_element(s in stream()) {
        let mut t = tdag_from_stream(&s);
        let budget = 2 * t.element_count();
        let mut steps = 0usize;
        while let Some(op) = enumerate_ops(&t, &StrategyTable::default())
            .into_iter()
            .find(TransferOp::is_paint)
        {
            t = apply_op(&t, &op).unwrap();
            steps += 1;
            prop_assert!(steps <= budget);
        }
    }

    #[test]
    fn additions_never_recolor(s in stream(), f in 0u32..2) {
        let t = tdag_from_stream(&s);
        let attach = tricolor_core::NodeId((f % t.nodes().len() as u32) as u32);
        if t.node(attach).label.is_some() {
            return Ok(());
        }
        let op = TransferOp::AddGreenNode {
            attach_to: attach,
            feature: "zz-new".to_string(),
            label: None,
        };
        if let Ok(next) = apply_op(&t, &op) {
            for n in t.nodes() {
                prop_assert_eq!(next.node(n.id).color, n.color);
            }
            for a in t.arcs() {
                prop_assert_eq!(next.arc(a.id).color, a.color);
            }
            prop_assert!(subsumes(&t, &next));
        }
    }

    #[test]
    fn self_classification_is_fully_interlingual(s in stream()) {
        let t = tdag_from_stream(&s);
        let report = classify(&t, &t);
        prop_assert_eq!(report.verdict, Verdict::FullyInterlingual);
        prop_assert!(report.c_plus.is_empty());
        prop_assert!(report.c_minus.is_empty());
        prop_assert!(report.c_new.is_empty());
    }

    #[test]
    fn canonical_key_is_iso_invariant(s in stream()) {
        let t = tdag_from_stream(&s);
        // Rebuild with node order reversed (ids permuted).
        let n = t.nodes().len() as u32;
        let perm = |id: tricolor_core::NodeId| tricolor_core::NodeId(n - 1 - id.0);
        let mut nodes: Vec<_> = t
            .nodes()
            .iter()
            .rev()
            .map(|m| tricolor_core::Node { id: perm(m.id), ..m.clone() })
            .collect();
        nodes.sort_by_key(|m| m.id);
        let arcs: Vec<_> = t
            .arcs()
            .iter()
            .map(|a| tricolor_core::Arc { from: perm(a.from), to: perm(a.to), ..a.clone() })
            .collect();
        let u = Tdag::build(nodes, arcs, perm(t.root())).unwrap();
        prop_assert!(iso_equal(&t, &u));
        prop_assert_eq!(t.canonical_key(), u.canonical_key());
    }
}
