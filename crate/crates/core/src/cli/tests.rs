use super::*;
use crate::conformal::PairingId;
use crate::exact::{q, qi, MultiIndex, MultiPoly};

fn bundled() -> Vec<(&'static str, &'static str)> {
    vec![
        ("symmetries", include_str!("../../taskfiles/symmetries.task")),
        ("ckt", include_str!("../../taskfiles/ckt.task")),
        ("curved", include_str!("../../taskfiles/curved.task")),
        ("random", include_str!("../../taskfiles/random.task")),
        ("negative", include_str!("../../taskfiles/negative.task")),
        ("suite", include_str!("../../taskfiles/suite.task")),
    ]
}

#[test]
fn polynomial_with_rational_coefficient() {
    let p = parse_polynomial("x1^2 - 2/3*x2*x3", 3).unwrap();
    assert_eq!(p.len(), 2);
    assert_eq!(p.coeff(&MultiIndex::from_exponents(&[2, 0, 0])), qi(1));
    assert_eq!(p.coeff(&MultiIndex::from_exponents(&[0, 1, 1])), q(-2, 3));
}

#[test]
fn polynomial_square_expands() {
    let p = parse_polynomial("(x1+x2)^2", 3).unwrap();
    let x = |i| MultiPoly::var(3, i);
    assert_eq!(p, &(&(&x(0) * &x(0)) + &(&x(0) * &x(1)).scale(&qi(2))) + &(&x(1) * &x(1)));
}

#[test]
fn polynomial_errors_carry_positions() {
    let e = parse_polynomial("x0", 3).unwrap_err();
    assert_eq!((e.line, e.column), (1, 1));
    let e = parse_polynomial("x1 + x4", 3).unwrap_err();
    assert_eq!(e.column, 6);
    let e = parse_polynomial("(x1 + 1", 3).unwrap_err();
    assert_eq!(e.column, 1);
    assert!(e.message.contains("unbalanced"));
    let e = parse_polynomial("x1 + 1)", 3).unwrap_err();
    assert_eq!(e.column, 7);
    let e = parse_polynomial("2/0*x1", 3).unwrap_err();
    assert!(e.message.contains("malformed rational"));
    assert!(parse_polynomial("x1/2", 3).is_err());
    assert_eq!(parse_polynomial("-x1 # trailing", 3).unwrap(), -MultiPoly::var(3, 0));
}

#[test]
fn display_reparses() {
    for text in ["x1^2 - 2/3*x2*x3", "-x2 + 1", "0", "(x1 - 1/2)^3*x3 - 7"] {
        let p = parse_polynomial(text, 3).unwrap();
        assert_eq!(parse_polynomial(&p.to_string(), 3).unwrap(), p);
    }
}

#[test]
fn minimal_file_gets_defaults() {
    let tf = parse_taskfile("dimension 3\ntask suite-all\n").unwrap();
    assert_eq!((tf.dimension, tf.order, tf.seed), (3, 6, 0));
    assert_eq!(tf.tasks, vec![Task::SuiteAll]);
}

#[test]
fn inversion_symmetry_task() {
    let tf = parse_taskfile(
        "dimension 3\nfield V = [x1^2 - x2^2 - x3^2, 2*x1*x2, 2*x1*x3]\ntask verify-symmetry-first V w=-1/2\n",
    )
    .unwrap();
    assert_eq!(tf.tasks, vec![Task::SymmetryFirst { field: "V".into(), w: Some(q(-1, 2)) }]);
    let r = run_tasks(&tf);
    assert_eq!(r.tasks[0].status, Status::Verified);
}

#[test]
fn unnormalized_conformal_factor_is_rejected() {
    let e = parse_taskfile("dimension 3\nconformal Omega = 2 + x1\n").unwrap_err();
    assert_eq!(e.line, 2);
    assert!(e.message.contains("must equal 1"));
}

#[test]
fn elaboration_errors() {
    let e = parse_taskfile("dimension 3\ntask verify-symmetry-first V\n").unwrap_err();
    assert!(e.message.contains("undeclared"));
    assert_eq!(e.column, 28);
    let e = parse_taskfile("dimension 3\nmetric g = flat weight=1\n").unwrap_err();
    assert!(e.message.contains("weight="));
    let e = parse_taskfile("field v = [1, 0, 0]\ndimension 3\n").unwrap_err();
    assert_eq!(e.line, 1);
    let e = parse_taskfile("dimension 2\nfield v = [1, 0, 0]\n").unwrap_err();
    assert!(e.message.contains("expected 2 entries"));
    let e = parse_taskfile("dimension 3\ndensity f = x1 weight=1/0\n").unwrap_err();
    assert!(e.message.contains("malformed rational"));
    let e = parse_taskfile("dimension 3\ndensity f = 1\nmetric g = flat\ntask verify-pairing yamabe g\n").unwrap_err();
    assert!(e.message.contains("undeclared field"));
    let e = parse_taskfile("dimension 3\ntask verify-pairing nosuch\n").unwrap_err();
    assert!(e.message.contains("unknown pairing"));
}

#[test]
fn bundled_files_round_trip() {
    for (name, text) in bundled() {
        let tf = parse_taskfile(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let printed = print_taskfile(&tf);
        assert_eq!(parse_taskfile(&printed).unwrap(), tf, "{name}");
        assert_eq!(print_taskfile(&parse_taskfile(&printed).unwrap()), printed, "{name}");
    }
}

#[test]
fn empty_report_json() {
    assert_eq!(emit_report(&Report::default(), Format::Json), r#"{"version":1,"tasks":[]}"#);
    assert_eq!(Report::default().exit_code(), 0);
}

#[test]
fn statuses_and_exit_code() {
    let mut r = Report::default();
    r.tasks.push(Entry::new("a", Status::Experimental, ""));
    assert_eq!(r.exit_code(), 0);
    r.tasks.push(Entry::new("b", Status::Error, "boom"));
    assert_eq!(r.exit_code(), 1);
    let json = emit_report(&r, Format::Json);
    assert!(json.contains(r#""status":"experimental""#) && json.contains(r#""status":"error""#));
}

#[test]
fn verified_entry_reports_comparison_order() {
    let tf = parse_taskfile(include_str!("../../taskfiles/curved.task")).unwrap();
    let r = run_tasks(&tf);
    let first = r.tasks.iter().find(|e| e.summary.starts_with("first")).unwrap();
    assert_eq!(first.status, Status::Verified);
    assert_eq!(first.residual_order, Some(5));
    assert!(r.success(), "{}", emit_report(&r, Format::Text));
}

#[test]
fn negative_controls_fail_the_run() {
    let tf = parse_taskfile(include_str!("../../taskfiles/negative.task")).unwrap();
    let r = run_tasks(&tf);
    assert!(r.tasks.iter().all(|e| e.status == Status::ResidualNonzero));
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn reports_are_deterministic() {
    let tf = parse_taskfile(include_str!("../../taskfiles/random.task")).unwrap();
    let a = emit_report(&run_tasks(&tf).without_timing(), Format::Json);
    let b = emit_report(&run_tasks(&tf).without_timing(), Format::Json);
    assert_eq!(a, b);
}

#[test]
fn task_errors_do_not_abort_siblings() {
    let tf = parse_taskfile(
        "dimension 3\nfield v = [1, 0, 0] weight=1/2\nfield t = [[x1, 0, 0], [0, 0, 0], [0, 0, 0]]\n\
         task verify-symmetry-second t\ntask verify-pairing gradient v\ntask verify-symmetry-first v\n",
    )
    .unwrap();
    let r = run_tasks(&tf);
    assert_eq!(r.tasks.len(), 3);
    assert_eq!(r.tasks[0].status, Status::Error);
    assert_eq!(r.tasks[1].status, Status::Error);
    assert_eq!(r.tasks[2].status, Status::Verified);
}

#[test]
fn pairing_names_parse() {
    for p in PairingId::ALL {
        assert_eq!(p.name().parse::<PairingId>().unwrap(), p);
    }
}

#[test]
fn solve_task_counts() {
    let tf = parse_taskfile("dimension 3\ntask solve-ckt valence=2 max-degree=4\n").unwrap();
    let r = run_tasks(&tf);
    assert_eq!(r.tasks[0].status, Status::Verified);
    assert_eq!(r.tasks[0].details.len(), 35);
    let tf = parse_taskfile("dimension 2\ntask solve-ckt valence=1 max-degree=3\n").unwrap();
    assert_eq!(run_tasks(&tf).tasks[0].status, Status::Experimental);
}
