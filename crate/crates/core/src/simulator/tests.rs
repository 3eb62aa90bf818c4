use alloc::vec::Vec;

use super::*;

fn cfg(sessions: u64, adv_ratio: f64, group: GroupId) -> CampaignConfig {
    CampaignConfig {
        sessions,
        adv_ratio,
        group,
        ..CampaignConfig::default()
    }
}

fn fake(index: u64, kind: SessionKind, accepted: bool, auth_us: u64) -> SessionMetrics {
    SessionMetrics {
        index,
        kind,
        accepted,
        abort_reason: None,
        auth_latency_us: auth_us,
        key_establish_us: None,
        keys_agree: None,
        message_delays_us: Vec::new(),
        ops_entity: OpCounts::default(),
        ops_twin: OpCounts::default(),
    }
}

#[test]
fn validation_names_the_field() {
    let base = CampaignConfig::default();
    assert_eq!(base.validate(), Ok(()));
    let cases: [(CampaignConfig, &str); 7] = [
        (
            CampaignConfig {
                sessions: 0,
                ..base.clone()
            },
            "sessions",
        ),
        (
            CampaignConfig {
                adv_ratio: 1.5,
                ..base.clone()
            },
            "adv_ratio",
        ),
        (
            CampaignConfig {
                adv_ratio: f64::NAN,
                ..base.clone()
            },
            "adv_ratio",
        ),
        (
            CampaignConfig {
                adversary_mix: AdversaryMix {
                    replay: -1.0,
                    ..AdversaryMix::default()
                },
                ..base.clone()
            },
            "adversary_mix",
        ),
        (
            CampaignConfig {
                adversary_mix: AdversaryMix {
                    replay: 0.0,
                    impersonate_twin: 0.0,
                    mitm_tamper: 0.0,
                    kci_impersonate_physical: 0.0,
                },
                ..base.clone()
            },
            "adversary_mix",
        ),
        (
            CampaignConfig {
                latency_range_ms: [20.0, 10.0],
                ..base.clone()
            },
            "latency_range_ms",
        ),
        (
            CampaignConfig {
                energy_weights: EnergyWeights {
                    hash: -0.5,
                    ..EnergyWeights::default()
                },
                ..base.clone()
            },
            "energy_weights",
        ),
    ];
    for (c, field) in cases {
        assert_eq!(c.validate().unwrap_err().field(), field);
        assert!(matches!(run_campaign(&c), Err(SimError::Config(_))));
    }
}

#[test]
fn adversarial_count_rounds_up() {
    let c = |n, r| cfg(n, r, GroupId::Toy).adversarial_count();
    assert_eq!(c(5000, 0.1), 500);
    assert_eq!(c(1, 0.0), 0);
    assert_eq!(c(10, 0.15), 2);
    assert_eq!(c(3, 1.0 / 3.0), 1);
    assert_eq!(c(7, 1.0), 7);
    assert_eq!(c(1, 0.001), 1);
}

#[test]
fn largest_remainder_apportionment() {
    let counts = |n, r, mix| {
        let mut c = cfg(n, r, GroupId::Toy);
        c.adversary_mix = mix;
        c.kind_counts().map(|(_, v)| v)
    };
    assert_eq!(counts(5000, 0.1, AdversaryMix::default()), [125; 4]);
    assert_eq!(counts(10, 1.0, AdversaryMix::default()), [3, 3, 2, 2]);
    assert_eq!(
        counts(100, 0.5, AdversaryMix::only(AdversaryKind::MitmTamper)),
        [0, 0, 50, 0]
    );
    let skewed = AdversaryMix {
        replay: 3.0,
        impersonate_twin: 1.0,
        mitm_tamper: 0.0,
        kci_impersonate_physical: 1.0,
    };
    // quotas 4.2, 1.4, 0, 1.4
    assert_eq!(counts(7, 1.0, skewed), [4, 2, 0, 1]);
}

#[test]
fn allocation_conserves_counts() {
    use rand::SeedableRng;
    let c = cfg(5000, 0.1, GroupId::Toy);
    let kinds = allocate_kinds(&c, &mut ChaCha20Rng::seed_from_u64(1));
    assert_eq!(kinds.len(), 5000);
    assert_eq!(
        kinds.iter().filter(|k| **k == SessionKind::Honest).count(),
        4500
    );
    for k in AdversaryKind::ALL {
        let n = kinds.iter().filter(|s| s.adversary() == Some(k)).count();
        assert_eq!(n, 125);
    }
    // shuffled: adversarial slots are not all at the end
    assert!(kinds[4500..].contains(&SessionKind::Honest));
}

#[test]
fn energy_proxy_is_linear() {
    let w = EnergyWeights::default();
    assert_eq!(energy_proxy(&OpCounts::default(), &w), 0.0);
    let ops = OpCounts {
        group_exp: 7,
        group_mul: 2,
        hash: 3,
    };
    assert_eq!(energy_proxy(&ops, &w), 75.0);
    let doubled = EnergyWeights {
        group_exp: 20.0,
        group_mul: 2.0,
        hash: 2.0,
    };
    assert_eq!(energy_proxy(&ops, &doubled), 150.0);
}

#[test]
fn honest_session_op_counts_are_exact() {
    for group in [GroupId::Toy, GroupId::Production] {
        let m = run_session(&cfg(1, 0.0, group), 0).unwrap();
        assert_eq!(
            m.ops_twin,
            OpCounts {
                group_exp: 3,
                group_mul: 1,
                hash: 1
            }
        );
        assert_eq!(
            m.ops_entity,
            OpCounts {
                group_exp: 4,
                group_mul: 1,
                hash: 2
            }
        );
        let report = run_campaign(&cfg(4, 0.0, group)).unwrap();
        assert_eq!(report.aggregates.energy_proxy, 4.0 * 75.0);
        assert_eq!(report.aggregates.energy_per_honest_session, Some(75.0));
    }
}

#[test]
fn zero_latency_session() {
    let mut c = cfg(1, 0.0, GroupId::Production);
    c.latency_range_ms = [0.0, 0.0];
    let m = run_session(&c, 0).unwrap();
    assert!(m.accepted);
    assert_eq!(m.keys_agree, Some(true));
    assert_eq!(m.auth_latency_us, 0);
    assert_eq!(m.key_establish_us, Some(0));
}

#[test]
fn fixed_latency_accounting_is_exact() {
    let mut c = cfg(20, 0.0, GroupId::Production);
    c.latency_range_ms = [10.0, 10.0];
    let report = run_campaign(&c).unwrap();
    for m in &report.sessions {
        assert_eq!(m.auth_latency_ms(), 40.0);
        assert_eq!(m.key_establish_ms(), Some(10.0));
        assert_eq!(m.message_delays_us, [10_000; 5]);
    }
    assert_eq!(report.aggregates.mean_auth_latency_ms, Some(40.0));
    assert_eq!(report.aggregates.p95_auth_latency_ms, Some(40.0));
    assert_eq!(report.aggregates.mean_key_establish_ms, Some(10.0));
}

#[test]
fn uniform_latency_stays_within_four_draws() {
    let report = run_campaign(&cfg(300, 0.0, GroupId::Toy)).unwrap();
    for m in &report.sessions {
        assert!((40_000..=80_000).contains(&m.auth_latency_us));
        let auth_delays: u64 = m.message_delays_us[..4].iter().sum();
        assert_eq!(m.auth_latency_us, auth_delays);
        assert!(m
            .message_delays_us
            .iter()
            .all(|d| (10_000..=20_000).contains(d)));
    }
}

#[test]
fn honest_only_campaign_has_no_far() {
    let report = run_campaign(&cfg(50, 0.0, GroupId::Production)).unwrap();
    assert_eq!(far(&report), None);
    assert_eq!(report.aggregates.honest_acceptance, Some(1.0));
    assert_eq!(report.aggregates.key_agreements, 50);
    assert!(report
        .aggregates
        .per_kind
        .iter()
        .all(|t| t.attempted == 0 && t.far.is_none()));
}

#[test]
fn far_arithmetic() {
    let mut sessions: Vec<SessionMetrics> = (0..100)
        .map(|i| fake(i, SessionKind::Replay, i == 17, 0))
        .collect();
    sessions.push(fake(100, SessionKind::Honest, true, 0));
    let agg = Aggregates::from_sessions(&sessions, &EnergyWeights::default());
    assert_eq!(agg.adversarial_sessions, 100);
    assert_eq!(agg.far, Some(0.01));
    assert_eq!(agg.per_kind[0].far, Some(0.01));
    assert_eq!(agg.per_kind[1].far, None);
}

#[test]
fn p95_uses_nearest_rank() {
    let sessions: Vec<SessionMetrics> = (1..=20)
        .map(|i| fake(i, SessionKind::Honest, true, i * 1000))
        .collect();
    let agg = Aggregates::from_sessions(&sessions, &EnergyWeights::default());
    // rank ceil(0.95 * 20) = 19
    assert_eq!(agg.p95_auth_latency_ms, Some(19.0));
    assert_eq!(agg.mean_auth_latency_ms, Some(10.5));
    let one = [fake(0, SessionKind::Honest, true, 7000)];
    let agg = Aggregates::from_sessions(&one, &EnergyWeights::default());
    assert_eq!(agg.p95_auth_latency_ms, Some(7.0));
}

#[test]
fn campaigns_are_deterministic_and_order_free() {
    let c = cfg(120, 0.5, GroupId::Production);
    let a = run_campaign(&c).unwrap();
    let b = run_campaign(&c).unwrap();
    assert_eq!(a, b);

    let runner = prepare(&c).unwrap();
    let mut reversed: Vec<SessionMetrics> = (0..c.sessions)
        .rev()
        .map(|i| runner.run_session(i).unwrap())
        .collect();
    reversed.reverse();
    assert_eq!(CampaignReport::assemble(c.clone(), reversed), a);

    let other = run_campaign(&CampaignConfig { rng_seed: 43, ..c }).unwrap();
    assert_ne!(other.sessions, a.sessions);
}

#[test]
fn production_attacks_are_never_accepted() {
    let report = run_campaign(&cfg(400, 1.0, GroupId::Production)).unwrap();
    assert_eq!(report.aggregates.adversarial_sessions, 400);
    assert_eq!(report.aggregates.far, Some(0.0));
    for t in &report.aggregates.per_kind {
        assert_eq!((t.attempted, t.accepted), (100, 0));
    }
    for m in &report.sessions {
        assert!(!m.accepted);
        match m.kind {
            SessionKind::Replay | SessionKind::ImpersonateTwin => {
                assert_eq!(m.abort_reason, Some(AbortReason::BadProof))
            }
            SessionKind::KciImpersonatePhysical => {
                assert_eq!(m.abort_reason, Some(AbortReason::BadIdentity))
            }
            _ => {}
        }
    }
}

#[test]
fn toy_attack_rates_sit_near_one_in_eleven() {
    let mut c = cfg(4400, 1.0, GroupId::Toy);
    c.latency_range_ms = [0.0, 0.0];
    let report = run_campaign(&c).unwrap();
    for t in &report.aggregates.per_kind {
        assert_eq!(t.attempted, 1100);
        match t.kind {
            // expected 100, standard deviation about 9.5
            AdversaryKind::MitmTamper => assert_eq!(t.accepted, 0),
            _ => assert!((60..=140).contains(&t.accepted), "{:?}", t),
        }
    }
}

#[test]
fn replay_session_in_production_is_rejected() {
    let mut c = cfg(8, 1.0, GroupId::Production);
    c.adversary_mix = AdversaryMix::only(AdversaryKind::Replay);
    let runner = prepare(&c).unwrap();
    for i in 0..8 {
        assert_eq!(runner.kind_of(i), SessionKind::Replay);
        let m = runner.run_session(i).unwrap();
        assert!(!m.accepted);
        // Commit, Challenge, Response, reject verdict
        assert_eq!(m.message_delays_us.len(), 4);
    }
}

#[test]
fn report_serializes_with_snake_case_kinds() {
    let kinds = [SessionKind::Honest, SessionKind::KciImpersonatePhysical];
    let names: Vec<&str> = kinds.iter().map(|k| k.as_str()).collect();
    assert_eq!(names, ["honest", "kci_impersonate_physical"]);
}
