mod common;

use std::path::Path;
use std::process::Command;

use classlift::churn::{compute_churn, compute_tree_churn, diff_lines, LineDiff};
use classlift::Error;
use common::*;

/// Line counts from GNU diff's normal output format.
fn gnu_diff(old: &str, new: &str) -> Option<LineDiff> {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    std::fs::write(&a, old).unwrap();
    std::fs::write(&b, new).unwrap();
    let out = Command::new("diff").arg("--minimal").arg(&a).arg(&b).output().ok()?;
    let count = |range: &str| match range.split_once(',') {
        Some((x, y)) => y.parse::<usize>().unwrap() - x.parse::<usize>().unwrap() + 1,
        None => 1,
    };
    let mut d = LineDiff::default();
    for line in String::from_utf8_lossy(&out.stdout).lines().filter(|l| l.starts_with(|c: char| c.is_ascii_digit())) {
        let op = line.find(['a', 'c', 'd']).unwrap();
        let (l, r) = (&line[..op], &line[op + 1..]);
        match &line[op..op + 1] {
            "a" => d.added += count(r),
            "d" => d.deleted += count(l),
            _ => {
                let (del, ins) = (count(l), count(r));
                d.changed += del.min(ins);
                d.added += ins - del.min(ins);
                d.deleted += del;
            }
        }
    }
    Some(d)
}

#[test]
fn line_counts_agree_with_gnu_diff() {
    if Command::new("diff").arg("--version").output().is_err() {
        eprintln!("diff not found; skipping");
        return;
    }
    for u in units() {
        for o in migrate_root(&u.root) {
            let ours = diff_lines(&o.original, &o.output);
            let theirs = gnu_diff(&o.original, &o.output).unwrap();
            // Any shortest edit script deletes and inserts the same number of lines.
            assert_eq!(ours.deleted, theirs.deleted, "{}", o.path.display());
            assert_eq!(ours.churned(), theirs.churned(), "{}", o.path.display());
            if let Some(r) = (theirs.deleted > 0).then(|| theirs.churned() as f64 / theirs.deleted as f64) {
                let mine = ours.churned() as f64 / ours.deleted as f64;
                assert!((mine - r).abs() < 1e-9);
            }
        }
    }
}

fn write_tree(root: &Path, files: &[(String, String)]) {
    for (rel, text) in files {
        let p = root.join(rel);
        std::fs::create_dir_all(p.parent().unwrap()).unwrap();
        std::fs::write(p, text).unwrap();
    }
}

fn migrated_tree(name: &str) -> (tempfile::TempDir, tempfile::TempDir) {
    let root = unit(name).root;
    let outcomes = migrate_root(&root);
    let (orig, mig) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let rel = |p: &Path| {
        if root.is_dir() {
            p.strip_prefix(&root).unwrap().to_string_lossy().into_owned()
        } else {
            p.file_name().unwrap().to_string_lossy().into_owned()
        }
    };
    write_tree(orig.path(), &outcomes.iter().map(|o| (rel(&o.path), o.original.clone())).collect::<Vec<_>>());
    write_tree(mig.path(), &outcomes.iter().map(|o| (rel(&o.path), o.output.clone())).collect::<Vec<_>>());
    (orig, mig)
}

#[test]
fn identical_trees_have_no_churn() {
    let root = unit("churn/tree3").root;
    let (m, _) = compute_tree_churn(&root, &root, true).unwrap();
    assert_eq!((m.churned_loc, m.deleted_loc, m.files_churned), (0, 0, 0));
    assert_eq!((m.rel_churned, m.rel_deleted, m.rel_files), (0.0, 0.0, 0.0));
    assert_eq!(m.churn_over_delete, None);
    assert_eq!(m.file_count, 3);
}

#[test]
fn one_of_three_files_migrated() {
    let (orig, mig) = migrated_tree("churn/tree3");
    let (m, _) = compute_tree_churn(orig.path(), mig.path(), true).unwrap();
    assert_eq!((m.files_churned, m.file_count), (1, 3));
    assert!((m.rel_files - 1.0 / 3.0).abs() < 1e-12);
    let r = m.churn_over_delete.unwrap();
    assert!((r - 1.0).abs() <= 0.15, "{r}");
}

#[test]
fn single_file_migration_churns_one_file() {
    let (orig, mig) = migrated_tree("idioms/queue_stack.js");
    let (m, _) = compute_tree_churn(orig.path(), mig.path(), false).unwrap();
    assert_eq!((m.files_churned, m.rel_files), (1, 1.0));
    let r = m.churn_over_delete.unwrap();
    assert!((0.9..=1.2).contains(&r), "{r}");
}

#[test]
fn dense_fixture_churns_more_than_sparse() {
    let rel = |name: &str| {
        let o = migrate_root(&unit(name).root).remove(0);
        compute_churn(&[(o.path, o.original, o.output)], false).0.rel_churned
    };
    let (dense, sparse) = (rel("churn/dense.js"), rel("churn/sparse.js"));
    assert!(dense > sparse, "dense {dense} <= sparse {sparse}");
}

#[test]
fn file_missing_from_one_tree_is_reported() {
    let (orig, mig) = migrated_tree("churn/tree3");
    std::fs::remove_file(mig.path().join("lib/numbers.js")).unwrap();
    match compute_tree_churn(orig.path(), mig.path(), true) {
        Err(Error::MissingCounterpart(p)) => assert_eq!(p, Path::new("lib/numbers.js")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn aggregation_does_not_depend_on_order() {
    let outcomes = migrate_root(&fixtures().join("idioms"));
    let mut pairs: Vec<_> = outcomes.into_iter().map(|o| (o.path, o.original, o.output)).collect();
    let (a, _) = compute_churn(&pairs, true);
    pairs.reverse();
    let (b, _) = compute_churn(&pairs, false);
    assert_eq!(a, b);
}
