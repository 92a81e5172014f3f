//! Sweep-level invariants: checkpoint/resume equivalence, combined-equals-
//! merge, and census counts against the totient table.

use dlog_graphs::graph::StatSums;
use dlog_graphs::numtheory::PrimeContext;
use dlog_graphs::sweep::{run_sweep, ClassFilter, SweepConfig};

#[test]
fn complete_sweep_counts_match_totients() {
    let res = run_sweep(&SweepConfig::new(2027)).unwrap();
    let ctx = PrimeContext::new(2027).unwrap();
    for (m, count) in ctx.class_counts() {
        assert_eq!(res.per_class[&m].graph_count(), count, "m={m}");
    }
    assert_eq!(res.processed, 2026);
}

#[test]
fn combined_equals_merge_of_classes() {
    let res = run_sweep(&SweepConfig::new(1009)).unwrap();
    let mut merged = StatSums::default();
    for s in res.per_class.values() {
        merged.merge(&s.sums);
    }
    assert_eq!(merged, res.combined.sums);
}

#[test]
fn interrupted_run_resumes_to_identical_result() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("sweep.ck");

    // first leg: one chunk, then stop
    let partial = run_sweep(&SweepConfig {
        checkpoint: Some(ck.clone()),
        chunk_budget: Some(1),
        ..SweepConfig::new(2027)
    })
    .unwrap();
    assert!(!partial.complete);
    assert_eq!(partial.chunks_done, 1);

    // second leg: drain the rest from the checkpoint
    let resumed = run_sweep(&SweepConfig {
        checkpoint: Some(ck.clone()),
        ..SweepConfig::new(2027)
    })
    .unwrap();
    assert!(resumed.complete);

    let fresh = run_sweep(&SweepConfig::new(2027)).unwrap();
    assert_eq!(resumed, fresh);

    // re-running a finished checkpointed sweep is a no-op with the same
    // answer
    let replay = run_sweep(&SweepConfig {
        checkpoint: Some(ck),
        ..SweepConfig::new(2027)
    })
    .unwrap();
    assert_eq!(replay, fresh);
}

#[test]
fn checkpoint_for_different_sweep_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("sweep.ck");
    run_sweep(&SweepConfig {
        checkpoint: Some(ck.clone()),
        ..SweepConfig::new(1009)
    })
    .unwrap();

    // same path, different prime
    let err = run_sweep(&SweepConfig {
        checkpoint: Some(ck.clone()),
        ..SweepConfig::new(2027)
    })
    .unwrap_err();
    assert!(matches!(err, dlog_graphs::Error::CheckpointMismatch { .. }));

    // same prime, different class filter
    let err = run_sweep(&SweepConfig {
        checkpoint: Some(ck),
        classes: ClassFilter::only(vec![1]),
        ..SweepConfig::new(1009)
    })
    .unwrap_err();
    assert!(matches!(err, dlog_graphs::Error::CheckpointMismatch { .. }));
}

#[test]
fn corrupt_checkpoint_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("sweep.ck");
    std::fs::write(&ck, b"truncated{").unwrap();
    let err = run_sweep(&SweepConfig {
        checkpoint: Some(ck),
        ..SweepConfig::new(1009)
    })
    .unwrap_err();
    assert!(matches!(err, dlog_graphs::Error::CheckpointCorrupt { .. }));
}

#[test]
fn filtered_sweep_counts_only_admitted_classes() {
    let cfg = SweepConfig {
        classes: ClassFilter::only(vec![1, 2]),
        ..SweepConfig::new(2027)
    };
    let res = run_sweep(&cfg).unwrap();
    let ctx = PrimeContext::new(2027).unwrap();
    let expected = ctx.count_m_ary(1).unwrap() + ctx.count_m_ary(2).unwrap();
    assert_eq!(res.processed, expected);
    assert_eq!(res.combined.graph_count(), expected);
}
