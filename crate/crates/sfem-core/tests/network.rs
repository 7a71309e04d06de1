//! End-to-end behaviour of the SF-EM network on a small symbol world:
//! two user-action symbols (a, e), eight device-event symbols (b, c, d, f,
//! g, h, i, j), no environment or device-state channels.

use sfem_core::feedback::FeedbackClass;
use sfem_core::network::{ChannelDims, NetworkInput, Polarity, SfemConfig, SfemNetwork};
use sfem_core::recognize::{Episode, EpisodeToken};

const USER_DIM: usize = 3; // a, e, reserved gap slot
const EVENT_DIM: usize = 8; // b c d f g h i j

fn dims() -> ChannelDims {
    ChannelDims {
        user: USER_DIM,
        env: 0,
        dev_state: 0,
        dev_event: EVENT_DIM,
    }
}

fn config() -> SfemConfig {
    let mut c = SfemConfig::new(dims());
    // Single-event cues against length-4 episodes sit near 0.04; the
    // default floor of 0.05 is for richer cues.
    c.t_min = 0.02;
    c
}

fn ctx(slot: usize) -> NetworkInput {
    let mut user = vec![0.0; USER_DIM];
    user[slot] = 1.0;
    NetworkInput {
        user,
        env: vec![],
        dev_state: vec![],
        dev_event: vec![0.0; EVENT_DIM],
    }
}

fn svc(slot: usize) -> NetworkInput {
    let mut dev_event = vec![0.0; EVENT_DIM];
    dev_event[slot] = 1.0;
    NetworkInput {
        user: vec![0.0; USER_DIM],
        env: vec![],
        dev_state: vec![],
        dev_event,
    }
}

/// Observe the ten symbols in order a b c d e f g h i j, returning their
/// event-node indices keyed by symbol position.
fn observe_alphabet(net: &mut SfemNetwork) -> Vec<usize> {
    let inputs = [
        ctx(0),
        svc(0),
        svc(1),
        svc(2),
        ctx(1),
        svc(3),
        svc(4),
        svc(5),
        svc(6),
        svc(7),
    ];
    inputs
        .iter()
        .enumerate()
        .map(|(t, input)| net.observe_event(input, t as f64).unwrap())
        .collect()
}

#[test]
fn identical_inputs_reuse_a_node_and_orthogonal_inputs_do_not() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let first = net.observe_event(&ctx(0), 0.0).unwrap();
    let again = net.observe_event(&ctx(0), 1.0).unwrap();
    assert_eq!(first, again);
    let other = net.observe_event(&ctx(1), 2.0).unwrap();
    assert_ne!(first, other);
    let service = net.observe_event(&svc(0), 3.0).unwrap();
    assert_ne!(other, service);
    assert_eq!(net.event_count(), 3);
}

#[test]
fn malformed_inputs_violate_the_contract() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let mut both = ctx(0);
    both.dev_event[0] = 1.0;
    assert!(net.observe_event(&both, 0.0).is_err());

    let zero = NetworkInput {
        user: vec![0.0; USER_DIM],
        env: vec![],
        dev_state: vec![],
        dev_event: vec![0.0; EVENT_DIM],
    };
    assert!(net.observe_event(&zero, 0.0).is_err());

    let wrong_dim = NetworkInput {
        user: vec![1.0],
        env: vec![],
        dev_state: vec![],
        dev_event: vec![0.0; EVENT_DIM],
    };
    assert!(net.observe_event(&wrong_dim, 0.0).is_err());
}

#[test]
fn relearning_an_episode_reactivates_instead_of_duplicating() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    let ep = Episode::from_events(&[ids[0], ids[1], ids[2], ids[3]]);

    let first = net.learn_episode(&ep, Polarity::Ordinary).unwrap();
    assert!(first.created);
    assert_eq!(net.episode(first.node).unwrap().strength, 0.8);

    let second = net.learn_episode(&ep, Polarity::Ordinary).unwrap();
    assert!(!second.created);
    assert_eq!(second.node, first.node);
    assert_eq!(net.episode_count(), 1);
    let s = net.episode(first.node).unwrap().strength;
    assert!((s - 0.82).abs() < 1e-12);
}

#[test]
fn distinct_episodes_occupy_distinct_nodes() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    net.learn_episode(
        &Episode::from_events(&[ids[0], ids[1], ids[2], ids[3]]),
        Polarity::Ordinary,
    )
    .unwrap();
    net.learn_episode(&Episode::from_events(&[ids[4], ids[5], ids[6]]), Polarity::Ordinary)
        .unwrap();
    assert_eq!(net.episode_count(), 2);
}

#[test]
fn short_episodes_are_rejected() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    let err = net.learn_episode(&Episode::from_events(&[ids[0]]), Polarity::Ordinary);
    assert!(err.is_err());
}

#[test]
fn partial_cue_retrieves_the_full_episode() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    let ep1: Vec<usize> = vec![ids[0], ids[1], ids[2], ids[3]];
    let ep2: Vec<usize> = vec![ids[4], ids[5], ids[6]];
    net.learn_episode(&Episode::from_events(&ep1), Polarity::Ordinary).unwrap();
    net.learn_episode(&Episode::from_events(&ep2), Polarity::Ordinary).unwrap();

    let out = net.retrieve_service(&[ids[0]]).unwrap();
    let r = out.retrieval.expect("episode 1 should be retrieved");
    assert_eq!(r.events, ep1);

    let out = net.retrieve_service(&[ids[4]]).unwrap();
    assert_eq!(out.retrieval.unwrap().events, ep2);
}

#[test]
fn unseen_cue_event_retrieves_nothing_and_still_decays() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    let ep = Episode::from_events(&[ids[0], ids[1], ids[2], ids[3]]);
    net.learn_episode(&ep, Polarity::Ordinary).unwrap();
    let before = net.strengths();

    // h was observed but belongs to no episode.
    let out = net.retrieve_service(&[ids[7]]).unwrap();
    assert!(out.retrieval.is_none());
    let after = net.strengths();
    for (id, s) in after {
        assert!(s < before[&id], "a completed activation decays losers");
    }
}

#[test]
fn shorter_episode_wins_a_shared_first_event_cue() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    let short = vec![ids[4], ids[5], ids[6]];
    let long = vec![ids[4], ids[7], ids[8], ids[9]];
    net.learn_episode(&Episode::from_events(&short), Polarity::Ordinary).unwrap();
    net.learn_episode(&Episode::from_events(&long), Polarity::Ordinary).unwrap();

    let out = net.retrieve_service(&[ids[4]]).unwrap();
    assert_eq!(out.retrieval.unwrap().events, short);
}

#[test]
fn negative_memory_blocks_rejected_routines_absolutely() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    let rejected = vec![ids[4], ids[5], ids[6]];
    let preferred = vec![ids[4], ids[7], ids[8], ids[9]];
    net.learn_episode(&Episode::from_events(&rejected), Polarity::Ordinary).unwrap();
    net.learn_episode(&Episode::from_events(&preferred), Polarity::Ordinary).unwrap();
    net.learn_episode(&Episode::from_events(&rejected), Polarity::Negative).unwrap();
    assert_eq!(net.negative_count(), 1);

    // The rejected routine out-activates the preferred one but may never
    // be served again.
    let out = net.retrieve_service(&[ids[4]]).unwrap();
    assert_eq!(out.retrieval.unwrap().events, preferred);

    // A cue only the rejected routine covers yields nothing at all.
    let out = net.retrieve_service(&[ids[5]]).unwrap();
    assert!(out.retrieval.is_none());
}

#[test]
fn negative_nodes_have_frozen_strength_and_are_never_pruned() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    net.learn_episode(&Episode::from_events(&[ids[4], ids[5]]), Polarity::Negative).unwrap();
    net.learn_episode(
        &Episode::from_events(&[ids[0], ids[1], ids[2], ids[3]]),
        Polarity::Ordinary,
    )
    .unwrap();
    for _ in 0..400 {
        let _ = net.retrieve_service(&[ids[9]]).unwrap();
    }
    assert_eq!(net.negative_count(), 1, "negative memory never expires");
}

#[test]
fn strong_feedback_lowers_vigilance_and_boosts_competition() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    let ep = Episode::from_events(&[ids[0], ids[1], ids[2], ids[3]]);
    let node = net.learn_episode(&ep, Polarity::Ordinary).unwrap().node;

    let class = net.apply_feedback(node, 2.0).unwrap();
    assert_eq!(class, FeedbackClass::StrongPositive);
    let rho = net.episode(node).unwrap().vigilance;
    assert!((rho - 0.855).abs() < 1e-12);

    // The winning activation now carries the coefficient 0.9 / 0.855 > 1.
    let out = net.retrieve_service(&[ids[0]]).unwrap();
    let r = out.retrieval.unwrap();
    assert!((r.activation - (0.9 / 0.855) * (0.4f64.powi(3) / 1.624)).abs() < 1e-9);
}

#[test]
fn weak_feedback_reinforces_without_touching_vigilance() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    let ep = Episode::from_events(&[ids[0], ids[1], ids[2], ids[3]]);
    let node = net.learn_episode(&ep, Polarity::Ordinary).unwrap().node;

    let class = net.apply_feedback(node, 1.0).unwrap();
    assert_eq!(class, FeedbackClass::WeakPositive);
    let n = net.episode(node).unwrap();
    assert!((n.strength - 0.82).abs() < 1e-12);
    assert_eq!(n.vigilance, 0.9);
}

#[test]
fn two_negatives_then_one_missed_activation_delete_the_node() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    let ep1 = Episode::from_events(&[ids[0], ids[1], ids[2], ids[3]]);
    let ep2 = Episode::from_events(&[ids[4], ids[5], ids[6]]);
    net.learn_episode(&ep1, Polarity::Ordinary).unwrap();
    let target = net.learn_episode(&ep2, Polarity::Ordinary).unwrap().node;
    assert_eq!(net.episode(target).unwrap().strength, 0.8);

    assert_eq!(net.apply_feedback(target, -1.0).unwrap(), FeedbackClass::Negative);
    assert!(net.episode(target).is_some());
    assert_eq!(net.apply_feedback(target, -1.0).unwrap(), FeedbackClass::Negative);
    let floored = net.episode(target).unwrap().strength;
    assert!(floored > 0.1, "floor sits just above the threshold");

    // The next field activation in which the node loses is the missed
    // activation that kills it.
    let out = net.learn_episode(&ep1, Polarity::Ordinary).unwrap();
    assert_eq!(out.pruned, vec![target]);
    assert!(net.episode(target).is_none());

    // Each negative also registered the routine once.
    assert_eq!(net.negative_count(), 1);
}

#[test]
fn event_layer_nodes_are_never_pruned() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    let before = net.event_count();
    net.learn_episode(&Episode::from_events(&[ids[0], ids[1]]), Polarity::Ordinary).unwrap();
    for _ in 0..300 {
        let _ = net.retrieve_service(&[ids[9]]).unwrap();
    }
    assert_eq!(net.event_count(), before);
    assert_eq!(net.episode_count(), 0, "the ordinary node decays away");
}

#[test]
fn gap_tokens_learn_through_a_reserved_event_node() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    let ep = Episode {
        tokens: vec![
            EpisodeToken::Event(ids[0]),
            EpisodeToken::TimeGap,
            EpisodeToken::Event(ids[1]),
        ],
    };
    let node = net.learn_episode(&ep, Polarity::Ordinary).unwrap().node;
    let gap = net.gap_node().expect("gap node committed on demand");
    let decoded = net.decode_episode(node).unwrap();
    assert_eq!(decoded, vec![ids[0], gap, ids[1]]);
}

#[test]
fn feedback_on_unknown_or_disabled_targets_is_an_error() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    assert!(net.apply_feedback(42, 2.0).is_err());

    let mut vanilla_cfg = config();
    vanilla_cfg.feedback_enabled = false;
    vanilla_cfg.negative_enabled = false;
    let mut vanilla = SfemNetwork::new(vanilla_cfg).unwrap();
    let vids = observe_alphabet(&mut vanilla);
    let node = vanilla
        .learn_episode(&Episode::from_events(&[vids[0], vids[1]]), Polarity::Ordinary)
        .unwrap()
        .node;
    assert!(vanilla.apply_feedback(node, -1.0).is_err());
    let _ = ids;
}

#[test]
fn vanilla_retrieval_reactivates_immediately() {
    let mut cfg = config();
    cfg.feedback_enabled = false;
    cfg.negative_enabled = false;
    let mut net = SfemNetwork::new(cfg).unwrap();
    let ids = observe_alphabet(&mut net);
    let node = net
        .learn_episode(&Episode::from_events(&[ids[4], ids[5], ids[6]]), Polarity::Ordinary)
        .unwrap()
        .node;
    let s0 = net.episode(node).unwrap().strength;
    let out = net.retrieve_service(&[ids[4]]).unwrap();
    assert_eq!(out.retrieval.unwrap().node, node);
    let s1 = net.episode(node).unwrap().strength;
    assert!((s1 - (s0 + (1.0 - s0) * 0.1)).abs() < 1e-12);
}

#[test]
fn feedback_enabled_retrieval_defers_the_winner_update() {
    let mut net = SfemNetwork::new(config()).unwrap();
    let ids = observe_alphabet(&mut net);
    let node = net
        .learn_episode(&Episode::from_events(&[ids[4], ids[5], ids[6]]), Polarity::Ordinary)
        .unwrap()
        .node;
    let s0 = net.episode(node).unwrap().strength;
    let _ = net.retrieve_service(&[ids[4]]).unwrap();
    assert_eq!(net.episode(node).unwrap().strength, s0);

    net.confirm_service(node).unwrap();
    let s1 = net.episode(node).unwrap().strength;
    assert!((s1 - (s0 + (1.0 - s0) * 0.1)).abs() < 1e-12);
}

#[test]
fn empty_cue_is_rejected() {
    let mut net = SfemNetwork::new(config()).unwrap();
    assert!(net.retrieve_service(&[]).is_err());
}

#[test]
fn network_is_transferable_between_threads() {
    fn require_send_sync<T: Send + Sync>() {}
    require_send_sync::<SfemNetwork>();
    require_send_sync::<NetworkInput>();
}
