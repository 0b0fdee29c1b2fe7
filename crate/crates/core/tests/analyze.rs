mod common;

use common::{instance, instance_set};
use kgforge::analyze::{
    class_distribution, closure_stats, evaluate_alignment, kg_profile, same_label_fraction, top_matched, LabelIndex,
    DEFAULT_BLOCKLIST,
};
use kgforge::kg::namespace::{rdf_type, rdfs_label};
use kgforge::kg::{EntityKind, KnowledgeGraph, Literal, Namespace, Triple};
use kgforge::matching::Alignment;

#[test]
fn closure_stats_by_hand() {
    let s =
        closure_stats(&[instance_set(&[("a", "X"), ("b", "X")]), instance_set(&[("a", "Y"), ("b", "Y"), ("c", "Y")])]);
    let r = s.get(EntityKind::Instance).unwrap();
    assert_eq!((r.count, r.min, r.max, r.total), (2, 2, 3, 5));
    assert_eq!(r.mean, 2.5);
    assert_eq!(r.std_dev, 0.5);
    assert!(s.get(EntityKind::Class).is_none());

    let five = instance_set(&[("a", "Z"), ("b", "Z"), ("c", "Z"), ("d", "Z"), ("e", "Z")]);
    let r = closure_stats(&[five]).rows[0].clone();
    assert_eq!((r.count, r.min, r.max, r.mean, r.std_dev), (1, 5, 5, 5.0, 0.0));
    assert!(closure_stats(&[]).rows.is_empty());
    assert_eq!(closure_stats(&[]).to_tsv(), "kind\tsets\tmin\tmax\tmean\tstddev\n");
}

#[test]
fn same_label_fraction_by_hand() {
    let (kgs, al) = common::label_toy();
    let labels = LabelIndex::new(&kgs);
    assert_eq!(same_label_fraction([&al], &labels), 0.5);
    let mut reordered = al.correspondences().to_vec();
    reordered.reverse();
    assert_eq!(same_label_fraction([&Alignment::new(reordered)], &labels), 0.5);
    let only_first = Alignment::new(al.correspondences()[..1].to_vec());
    assert_eq!(same_label_fraction([&only_first], &labels), 0.0);
    assert_eq!(same_label_fraction([&Alignment::default()], &labels), 0.0);
}

#[test]
fn top_matched_by_hand() {
    let sets = vec![
        instance_set(&[("a", "Paris"), ("b", "Paris"), ("c", "Paris"), ("d", "Paris_(city)")]),
        instance_set(&[("a", "Rome"), ("b", "Roma"), ("c", "Rome")]),
        instance_set(&[("a", "Main_Page"), ("b", "Main_Page")]),
        instance_set(&[("a", "Oslo"), ("b", "Oslo")]),
    ];
    let labels = LabelIndex::default();
    let blocklist: Vec<String> = DEFAULT_BLOCKLIST.iter().map(|s| s.to_string()).collect();
    let top = top_matched(&sets, 2, EntityKind::Instance, &labels, &blocklist);
    assert_eq!(top, vec![("paris".to_string(), 4), ("rome".to_string(), 3)]);
    let all = top_matched(&sets, 10, EntityKind::Instance, &labels, &blocklist);
    assert_eq!(all.len(), 3);
    assert!(all.iter().all(|(l, _)| l != "main page"));
    assert!(top_matched(&sets, 10, EntityKind::Class, &labels, &blocklist).is_empty());
}

#[test]
fn evaluation_by_hand() {
    let ns = Namespace::default();
    let (system, reference) = common::eval_toy();
    let r = evaluate_alignment(&system, &reference, &ns);
    let all = r.overall();
    assert_eq!((all.system, all.reference, all.correct), (3, 4, 2));
    assert!((all.precision - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(all.recall, 0.5);
    assert!((all.f1 - 4.0 / 7.0).abs() < 1e-12);
    assert_eq!(
        r.get(EntityKind::Instance).unwrap(),
        &kgforge::analyze::EvalRow { kind: Some(EntityKind::Instance), ..all.clone() }
    );

    // direction does not matter
    assert_eq!(evaluate_alignment(&system.reversed(), &reference, &ns).overall(), all);
    let same = evaluate_alignment(&reference, &reference, &ns);
    assert_eq!((same.overall().precision, same.overall().recall, same.overall().f1), (1.0, 1.0, 1.0));
    let empty = evaluate_alignment(&Alignment::default(), &reference, &ns);
    assert_eq!((empty.overall().precision, empty.overall().recall, empty.overall().f1), (0.0, 0.0, 0.0));
}

#[test]
fn profile_edge_cases() {
    let ns = Namespace::default();
    let p = kg_profile(&KnowledgeGraph::empty("e"), &ns);
    assert_eq!((p.instances, p.classes, p.infobox_classes, p.properties, p.assertions), (0, 0, 0, 0, 0));

    let class = ns.class("w", "Thing").unwrap();
    let g = KnowledgeGraph::new(
        "w",
        [
            Triple::new(instance("w", "A"), rdf_type(), class.clone()),
            Triple::new(instance("w", "A"), rdfs_label(), Literal::plain("A")),
        ],
    );
    let p = kg_profile(&g, &ns);
    assert_eq!((p.instances, p.classes, p.infobox_classes, p.properties, p.assertions), (1, 1, 0, 0, 1));
}

#[test]
fn distribution_edge_cases() {
    let ns = Namespace::default();
    let untyped = KnowledgeGraph::new("w", [Triple::new(instance("w", "A"), rdfs_label(), Literal::plain("A"))]);
    let d = class_distribution(&untyped, 0.0, &ns).unwrap();
    assert_eq!(d.value, 0);
    assert!(d.children.is_empty());

    let typed = KnowledgeGraph::new(
        "w",
        (0..5).map(|i| {
            let class = ns.class("w", ["Cat", "Dog", "Cat", "Eel", "Cat"][i]).unwrap();
            Triple::new(instance("w", &format!("P{i}")), rdf_type(), class)
        }),
    );
    let d = class_distribution(&typed, 0.999, &ns).unwrap();
    assert_eq!(d.children.len(), 1);
    assert_eq!((d.children[0].name.as_str(), d.children[0].value), ("other", 5));

    let d = class_distribution(&typed, 0.3, &ns).unwrap();
    let names: Vec<(&str, usize)> = d.children.iter().map(|c| (c.name.as_str(), c.value)).collect();
    assert_eq!(names, vec![("Cat", 3), ("other", 2)]);
    assert!((d.children.iter().map(|c| c.share).sum::<f64>() - 1.0).abs() < 1e-9);
    assert!(class_distribution(&typed, 1.0, &ns).is_err());
}
