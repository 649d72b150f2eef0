mod common;

use classlift::detect::metrics;
use classlift::migrate::detect_program;
use common::*;

#[test]
fn queue_and_stack_are_detected() {
    let modules = load(&idiom("queue_stack.js"));
    let (_, classes) = detect_program(&modules, true);
    let classes = &classes[0];
    assert_eq!(classes.len(), 2);

    let queue = class(classes, "Queue");
    assert_eq!(queue.attributes, ["_elements"]);
    assert_eq!(queue.methods.iter().map(|m| m.name.as_str()).collect::<Vec<_>>(), ["isEmpty", "push", "pop"]);
    assert_eq!(queue.superclass, None);

    let stack = class(classes, "Stack");
    assert_eq!(stack.superclass.as_deref(), Some("Queue"));
    assert_eq!(stack.methods.iter().map(|m| m.name.as_str()).collect::<Vec<_>>(), ["push"]);
    assert!(stack.attributes.is_empty());

    let m = metrics(classes, &modules);
    assert_eq!((m.noc, m.nom), (2, 4));
    assert_eq!(m.class_density, 1.0);
}

#[test]
fn density_of_churn_fixtures() {
    for (name, expected) in [("churn/dense.js", 0.9), ("churn/sparse.js", 0.2)] {
        let modules = load(&unit(name).root);
        let (_, classes) = detect_program(&modules, false);
        let m = metrics(&classes[0], &modules);
        assert!((m.class_density - expected).abs() < 1e-9, "{name}: {}", m.class_density);
    }
}

#[test]
fn member_added_through_an_import_is_not_a_class_method() {
    let modules = load(&idiom("optional_feature"));
    let (_, classes) = detect_program(&modules, false);
    let container = class(&classes[0], "Container");
    let names: Vec<_> = container.methods.iter().map(|m| m.name.as_str()).collect();
    assert_eq!(names, ["addChild"]);
    assert!(classes[1].is_empty());
}
