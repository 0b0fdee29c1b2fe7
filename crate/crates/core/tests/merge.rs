mod common;

use std::fs;

use kgforge::hac::{plan_from_dendrogram, Dendrogram, Merge, MergePlan};
use kgforge::kg::{read_ntriples, KnowledgeGraph};
use kgforge::matching::{ExternalMatcher, Matcher, MatcherConfig};
use kgforge::merge::{alignment_path, execute_plan, union_path};
use kgforge::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn builtin() -> Matcher {
    Matcher::Builtin(MatcherConfig::default())
}

fn setup(count: usize, seed: u64) -> (tempfile::TempDir, Vec<KnowledgeGraph>, MergePlan) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kgs = common::synthetic_wikis(count, &mut rng);
    let ws = tempfile::tempdir().unwrap();
    common::write_leaves(ws.path(), &kgs);
    let plan = common::plan_for(&kgs);
    (ws, kgs, plan)
}

#[test]
fn one_and_eight_workers_write_identical_artifacts() {
    let (one, kgs, plan) = setup(20, 7);
    let many = tempfile::tempdir().unwrap();
    common::write_leaves(many.path(), &kgs);
    let a = execute_plan(&plan, one.path(), &builtin(), 1).unwrap();
    let b = execute_plan(&plan, many.path(), &builtin(), 8).unwrap();
    assert_eq!(a.root, b.root);
    assert_eq!(a.tasks.len(), 19);
    assert_eq!(common::read_tree(one.path()), common::read_tree(many.path()));
}

#[test]
fn root_contains_every_leaf_value() {
    let (ws, kgs, plan) = setup(6, 2);
    let out = execute_plan(&plan, ws.path(), &builtin(), 2).unwrap();
    let literals = |g: &KnowledgeGraph| {
        g.triples()
            .iter()
            .filter_map(|t| t.object.as_literal().map(|l| l.lexical().to_string()))
            .collect::<std::collections::BTreeSet<_>>()
    };
    let all: std::collections::BTreeSet<String> = kgs.iter().flat_map(literals).collect();
    assert_eq!(literals(&out.root), all);
    assert_eq!(out.root.id(), plan.node_name(plan.root()));
}

#[test]
fn resume_skips_finished_tasks() {
    let (ws, _, plan) = setup(8, 3);
    execute_plan(&plan, ws.path(), &builtin(), 4).unwrap();
    let before = common::read_tree(ws.path());

    let root = plan.node_name(plan.root());
    let last = plan.levels().last().unwrap()[0];
    fs::remove_file(union_path(ws.path(), &root)).unwrap();
    fs::remove_file(alignment_path(ws.path(), &plan.node_name(plan.levels()[0][0].output))).unwrap();
    // a half-written temporary from an interrupted run is ignored
    fs::write(ws.path().join("unions").join(format!(".{root}.nt.tmp")), "garbage").unwrap();

    let out = execute_plan(&plan, ws.path(), &builtin(), 4).unwrap();
    let rerun: Vec<&str> = out.tasks.iter().filter(|t| !t.resumed).map(|t| t.output_id.as_str()).collect();
    assert_eq!(rerun, vec![plan.node_name(plan.levels()[0][0].output), plan.node_name(last.output)]);
    let mut after = common::read_tree(ws.path());
    after.retain(|k, _| !k.contains(".tmp"));
    assert_eq!(before, after);
}

#[test]
fn single_leaf_plan_returns_the_leaf() {
    let kgs = common::synthetic_wikis(1, &mut ChaCha8Rng::seed_from_u64(4));
    let ws = tempfile::tempdir().unwrap();
    common::write_leaves(ws.path(), &kgs);
    let plan = MergePlan::new(vec![kgs[0].id().to_string()], Vec::new()).unwrap();
    let out = execute_plan(&plan, ws.path(), &builtin(), 1).unwrap();
    assert!(out.tasks.is_empty());
    assert_eq!(out.root.triples().len(), kgs[0].len());
}

#[test]
fn missing_leaf_is_reported() {
    let (ws, kgs, plan) = setup(4, 5);
    fs::remove_file(ws.path().join("kgs").join(format!("{}.nt", kgs[2].id()))).unwrap();
    match execute_plan(&plan, ws.path(), &builtin(), 2) {
        Err(Error::MissingArtifact { stage, path }) => {
            assert_eq!(stage, "extract");
            assert!(path.ends_with(format!("{}.nt", kgs[2].id())));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn external_matcher_drives_the_merge() {
    let (ws, kgs, _) = setup(3, 6);
    let d = Dendrogram::from_merges(
        3,
        vec![Merge { left: 0, right: 1, distance: 0.1, id: 3 }, Merge { left: 2, right: 3, distance: 0.2, id: 4 }],
    )
    .unwrap();
    let plan = plan_from_dendrogram(&d, kgs.iter().map(|g| g.id().to_string()).collect()).unwrap();
    // a matcher that finds nothing: the root is the plain union
    let ext = ExternalMatcher::new("test -s {A} && test -s {B} && : > {OUT}").unwrap();
    let out = execute_plan(&plan, ws.path(), &Matcher::External(ext), 2).unwrap();
    let total: std::collections::BTreeSet<_> = kgs.iter().flat_map(|g| g.triples().iter().cloned()).collect();
    assert_eq!(out.root.len(), total.len());
    assert!(fs::read_to_string(alignment_path(ws.path(), "u4")).unwrap().is_empty());
    let hidden = fs::read_dir(ws.path().join("alignments"))
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with('.'));
    assert_eq!(hidden.count(), 0);

    let failing = ExternalMatcher::new("exit 3 # {A} {B} {OUT}").unwrap();
    let fresh = tempfile::tempdir().unwrap();
    common::write_leaves(fresh.path(), &kgs);
    match execute_plan(&plan, fresh.path(), &Matcher::External(failing), 2) {
        Err(Error::Task { task, source }) => {
            assert_eq!(task, "u3");
            assert!(matches!(*source, Error::ExternalMatcher(_)));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn union_files_parse_back() {
    let (ws, _, plan) = setup(5, 8);
    execute_plan(&plan, ws.path(), &builtin(), 3).unwrap();
    for t in plan.tasks() {
        let name = plan.node_name(t.output);
        let f = fs::File::open(union_path(ws.path(), &name)).unwrap();
        let g = read_ntriples(name, std::io::BufReader::new(f)).unwrap();
        assert!(!g.is_empty());
    }
}
