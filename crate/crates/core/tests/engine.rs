use cardzkp::engine::{VerdictDistribution, VerdictEnumerator};
use cardzkp::graph::{edge, subsets};
use cardzkp::spanning::SpanningProtocol;
use cardzkp::Graph;

fn same(a: &VerdictDistribution, b: &VerdictDistribution) -> bool {
    (a.accept - b.accept).abs() < 1e-12
        && a.rejections.len() == b.rejections.len()
        && a.rejections.iter().zip(&b.rejections).all(|((ka, pa), (kb, pb))| ka == kb && (pa - pb).abs() < 1e-12)
}

#[test]
fn shortcuts_match_full_enumeration() {
    // Oracle: the plain enumerator expands every double scramble in full.
    for g in [Graph::path(2), Graph::path(3), Graph::new(3, [edge(1, 3)]).unwrap()] {
        let proto = SpanningProtocol::new(&g);
        for h in subsets(g.edges()) {
            let script = proto.honest_script(&h).unwrap();
            let fast = VerdictEnumerator::new().run(&proto.program, &script).unwrap();
            let full = VerdictEnumerator::without_lumping().run(&proto.program, &script).unwrap();
            let lumped = VerdictEnumerator::without_skipping().run(&proto.program, &script).unwrap();
            assert!(same(&fast, &full), "{g:?} {h:?}");
            assert!(same(&lumped, &full), "{g:?} {h:?}");
            assert!(fast.peak_states <= full.peak_states);
        }
    }
}
