mod common;

use common::*;

#[test]
fn migrated_fixtures_behave_like_the_originals() {
    let Some(node) = node() else {
        eprintln!("node not found; set NODE to an ES6-capable engine to run this test");
        return;
    };
    let executable: Vec<_> = units().into_iter().filter(|u| u.driver.is_some()).collect();
    assert!(executable.len() >= 14);
    for u in executable {
        let (before, after) = behaviour(&node, &u).unwrap_or_else(|e| panic!("{}: {e}", u.name));
        assert!(!before.is_empty(), "{}: driver printed nothing", u.name);
        assert_eq!(after, before, "{}", u.name);
    }
}
