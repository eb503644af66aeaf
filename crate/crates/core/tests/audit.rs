use cardzkp::audit::{self, run_real, run_simulator, Invocation};
use cardzkp::graph::Graph;
use cardzkp::spanning::SpanningProtocol;
use cardzkp::{Event, SeededSource, Symbol};

fn invocation(g: &Graph) -> Invocation {
    let proto = SpanningProtocol::new(g);
    let script = proto.honest_script(g.edges()).unwrap();
    Invocation::new(proto.program, script)
}

fn skeleton(t: &cardzkp::Transcript) -> Vec<String> {
    t.events().iter().map(|e| e.tag().to_string()).collect()
}

#[test]
fn structure_is_public() {
    let inv = invocation(&Graph::path(2));
    let a = run_real(&inv, &mut SeededSource::new(1)).unwrap();
    let b = run_real(&inv, &mut SeededSource::new(2)).unwrap();
    let s = run_simulator(&inv.program, &mut SeededSource::new(3)).unwrap();
    assert_eq!(a.len(), b.len());
    assert_eq!(skeleton(&a), skeleton(&b));
    assert_eq!(skeleton(&a), skeleton(&s));
    assert_eq!(a, run_real(&inv, &mut SeededSource::new(1)).unwrap());
}

#[test]
fn reveals_show_only_card_faces() {
    // Every event is a face-up card list or a public action; reveals of
    // encoding rows hold exactly one heart.
    let inv = invocation(&Graph::cycle(4));
    let t = run_real(&inv, &mut SeededSource::new(8)).unwrap();
    let mut checked = 0;
    for e in t.events() {
        if let Event::Reveal { tag, symbols } = e {
            if tag.ends_with("/select") || tag.ends_with("/row1") || tag.ends_with("/restore") {
                assert_eq!(symbols.iter().filter(|&&s| s == Symbol::Heart).count(), 1, "{tag}");
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn k2_exact_audit_and_mutant() {
    let inv = invocation(&Graph::path(2));
    assert!(audit::audit_exact(&inv).unwrap().equal(audit::EXACT_TOLERANCE));
    let first = inv.program.shuffle_indices()[0];
    let broken = Invocation::new(inv.program.without_instr(first), inv.script.clone());
    let c = audit::compare_real(&broken, &inv).unwrap();
    assert!(!c.equal(audit::EXACT_TOLERANCE), "{}", c.max_deviation);
}
