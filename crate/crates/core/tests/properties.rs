mod common;

use classlift::js::parse;
use classlift::migrate::{migrate_program, phases_ordered, replay, MigrateOptions};
use common::*;
use proptest::prelude::*;

#[test]
fn migration_is_idempotent_over_the_corpus() {
    for u in units() {
        for first in migrate_root(&u.root) {
            let second = migrate_text(&first.path.to_string_lossy(), &first.output);
            assert_eq!(second.output, first.output, "{}: second run changed {}", u.name, first.path.display());
            assert!(second.trace.is_empty(), "{}: second run applied {:?}", u.name, second.trace);
        }
    }
}

#[test]
fn traces_replay_and_respect_rule_order() {
    for u in units() {
        for o in migrate_root(&u.root) {
            assert_eq!(replay(&o.original, &o.trace), o.output, "{}", o.path.display());
            assert!(phases_ordered(&o.trace), "{}: {:?}", o.path.display(), o.trace);
            for p in &o.plans {
                assert!(phases_ordered(&p.rule_trace), "{}: {}", o.path.display(), p.class.name);
            }
        }
    }
}

#[test]
fn preserved_spans_survive_migration() {
    for u in units() {
        for o in migrate_root(&u.root) {
            let v = preservation_violations(&o);
            assert!(v.is_empty(), "{}: {v:?}", u.name);
        }
    }
}

#[test]
fn parser_round_trips_the_corpus() {
    for path in corpus_files() {
        let text = read(&path);
        let module = parse(&path, &text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(module.print(), text, "{}", path.display());
    }
}

#[test]
fn migrated_output_parses_and_round_trips() {
    for u in units() {
        for o in migrate_root(&u.root) {
            let module = parse(&o.path, &o.output).unwrap();
            assert_eq!(module.print(), o.output);
        }
    }
}

#[test]
fn sequential_and_parallel_runs_are_identical() {
    for u in units() {
        let modules = load(&u.root);
        let par = migrate_program(&modules, MigrateOptions { rule1_literal: false, parallel: true }).unwrap();
        let seq = migrate_program(&modules, MigrateOptions { rule1_literal: false, parallel: false }).unwrap();
        for (a, b) in par.iter().zip(&seq) {
            assert_eq!(a.output, b.output);
            assert_eq!(a.trace, b.trace);
            assert_eq!(a.plans, b.plans);
            assert_eq!(a.diagnostics, b.diagnostics);
        }
    }
}

#[test]
fn literal_rule1_keeps_constructor_properties_on_instances() {
    let src = "function A() {}\nA.make = function() {\n  return new A();\n};\n";
    let default = migrate_text("a.js", src);
    assert!(default.output.contains("static make()"), "{}", default.output);
    let literal = classlift::migrate::migrate_source("a.js", src, MigrateOptions { rule1_literal: true, parallel: false }).unwrap();
    assert!(!literal.output.contains("static"), "{}", literal.output);
}

fn fragment() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("function A(x) {\n  this.x = x;\n}\n".to_string()),
        Just("A.prototype.get = function() { return this.x; };\n".to_string()),
        Just("// line comment\n".to_string()),
        Just("/* block\n comment */".to_string()),
        Just("var s = 'a\\'b' + \"}\" + `t ${1 + {a: 1}.a}`;\n".to_string()),
        Just("var r = /[}]+/g.test('}}');\n".to_string()),
        Just("if (a) { b(); } else { c(); }\n".to_string()),
        Just("class K extends A { constructor() { super(); } }\n".to_string()),
        Just("x = y => ({ z: y });\n".to_string()),
        Just("\r\n".to_string()),
        Just("\t  \n".to_string()),
        Just(";".to_string()),
        "[a-z]{1,6}".prop_map(|s| format!("{s}();\n")),
    ]
}

proptest! {
    #[test]
    fn parser_round_trips_generated_sources(parts in prop::collection::vec(fragment(), 0..24)) {
        let text = parts.concat();
        let module = parse("gen.js", &text).unwrap();
        prop_assert_eq!(module.print(), text);
    }

    #[test]
    fn migration_of_generated_sources_is_idempotent(parts in prop::collection::vec(fragment(), 0..12)) {
        let text = parts.concat();
        let once = migrate_text("gen.js", &text);
        prop_assert_eq!(replay(&once.original, &once.trace), once.output.clone());
        let twice = migrate_text("gen.js", &once.output);
        prop_assert_eq!(twice.output, once.output);
    }
}
