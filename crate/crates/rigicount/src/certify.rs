//! Count certificates: the checkable implication chain behind the
//! realisation-count formula 2^(n - t).
//!
//! A certificate never asserts anything probabilistic. It asserts, for the
//! concrete input graph, a chain each link of which is deterministic: a
//! construction ordering exists, its suffix consists of exact degree-d
//! attachments, and the (d+1)-core is globally d-rigid, established either
//! through d(d+1)-connectivity of the d(d+1)-core (deterministic) or
//! through the randomized stress test (labelled as such).

use num_bigint::BigUint;
use serde::Serialize;

use crate::graph::{is_k_connected, k_core, peel_to_core, Graph};
use crate::ordering::{construct_ordering, validate_ordering};
use crate::rigidity::is_generically_globally_d_rigid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateStatus {
    CertifiedDeterministic,
    CertifiedRandomized,
    Refuted,
    Inconclusive,
}

impl CertificateStatus {
    pub fn is_certified(self) -> bool {
        matches!(
            self,
            CertificateStatus::CertifiedDeterministic | CertificateStatus::CertifiedRandomized
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    MinDegree,
    OrderingExists,
    SuffixExactD,
    CoreKConnected,
    CoreD1Connected,
    CoreGloballyRigidRandomized,
    ConeExponentCoherence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvidenceItem {
    pub check: CheckName,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountCertificate {
    pub status: CertificateStatus,
    pub d: usize,
    /// n - t, present exactly when the count is certified.
    pub exponent: Option<usize>,
    pub evidence: Vec<EvidenceItem>,
}

impl CountCertificate {
    pub fn first_failed(&self) -> Option<&EvidenceItem> {
        self.evidence.iter().find(|e| !e.passed)
    }

    /// 2^exponent for certified counts.
    pub fn certified_count(&self) -> Option<BigUint> {
        self.exponent.map(|e| BigUint::from(1u32) << e)
    }
}

/// The unconditional prediction 2^(n - t), with t the size of the
/// (d+1)-core. Certification is a separate concern.
pub fn predicted_count(g: &Graph, d: usize) -> BigUint {
    assert!(d >= 1, "d must be positive");
    let t = k_core(g, d + 1).survivors.len();
    BigUint::from(1u32) << (g.vertex_count() - t)
}

/// Attempts the deterministic evidence chain, then the randomized
/// fallback. Every certified verdict is entailed by its recorded evidence.
pub fn certify_count(g: &Graph, d: usize, seed: u64) -> CountCertificate {
    assert!(d >= 1, "d must be positive");
    let n = g.vertex_count();
    let k = d * (d + 1);
    let mut evidence = Vec::new();

    // A vertex of degree below d in a graph on more than d vertices makes
    // the realisation count infinite.
    if n >= d + 1 && g.min_degree() < d {
        evidence.push(EvidenceItem {
            check: CheckName::MinDegree,
            passed: false,
            detail: format!("minimum degree {} < d = {d}", g.min_degree()),
        });
        return CountCertificate { status: CertificateStatus::Refuted, d, exponent: None, evidence };
    }

    let core_d1 = k_core(g, d + 1).survivors;
    let t = core_d1.len();

    // Deterministic route.
    let deterministic = 'det: {
        match construct_ordering(g, d) {
            Ok(co) if validate_ordering(g, &co) => {
                evidence.push(EvidenceItem {
                    check: CheckName::OrderingExists,
                    passed: true,
                    detail: format!("s = {}, t = {}", co.s, co.t),
                });
                let mut pos = vec![0usize; n];
                for (i, &v) in co.order.iter().enumerate() {
                    pos[v] = i;
                }
                let exact = co.order[co.t..].iter().enumerate().all(|(off, &v)| {
                    let i = co.t + off;
                    g.neighbors(v).iter().filter(|&&u| pos[u] < i).count() == d
                });
                evidence.push(EvidenceItem {
                    check: CheckName::SuffixExactD,
                    passed: exact,
                    detail: format!("{} suffix vertices", n - co.t),
                });
                if !exact {
                    break 'det false;
                }
                let core_k = k_core(g, k).survivors;
                let core_k_conn = is_k_connected(&g.induced(&core_k), k);
                evidence.push(EvidenceItem {
                    check: CheckName::CoreKConnected,
                    passed: core_k_conn,
                    detail: format!("{}-core has {} vertices", k, core_k.len()),
                });
                if !core_k_conn {
                    break 'det false;
                }
                let core_d1_conn = is_k_connected(&g.induced(&core_d1), d + 1);
                evidence.push(EvidenceItem {
                    check: CheckName::CoreD1Connected,
                    passed: core_d1_conn,
                    detail: format!("{}-core has {} vertices", d + 1, t),
                });
                core_d1_conn
            }
            Ok(_) => {
                evidence.push(EvidenceItem {
                    check: CheckName::OrderingExists,
                    passed: false,
                    detail: "ordering produced but failed validation".into(),
                });
                false
            }
            Err(failure) => {
                evidence.push(EvidenceItem {
                    check: CheckName::OrderingExists,
                    passed: false,
                    detail: failure.to_string(),
                });
                false
            }
        }
    };
    if deterministic {
        return CountCertificate {
            status: CertificateStatus::CertifiedDeterministic,
            d,
            exponent: Some(n - t),
            evidence,
        };
    }

    // Randomized fallback: an exact degree-d peel to the (d+1)-core plus
    // the stress-matrix test on the core.
    let trace = peel_to_core(g, d + 1);
    let exact = !trace.survivors.is_empty() && trace.all_removals_exactly(d);
    evidence.push(EvidenceItem {
        check: CheckName::SuffixExactD,
        passed: exact,
        detail: if trace.survivors.is_empty() {
            format!("{}-core is empty", d + 1)
        } else {
            let bad = trace.removed.iter().filter(|s| s.degree != d).count();
            format!("{} of {} removals off degree {d}", bad, trace.removed.len())
        },
    });
    if exact {
        let core_graph = g.induced(&trace.survivors);
        let globally_rigid = is_generically_globally_d_rigid(&core_graph, d, seed);
        evidence.push(EvidenceItem {
            check: CheckName::CoreGloballyRigidRandomized,
            passed: globally_rigid,
            detail: format!("stress test on {} core vertices", trace.survivors.len()),
        });
        if globally_rigid {
            return CountCertificate {
                status: CertificateStatus::CertifiedRandomized,
                d,
                exponent: Some(n - t),
                evidence,
            };
        }
    }
    CountCertificate { status: CertificateStatus::Inconclusive, d, exponent: None, evidence }
}

/// Spherical count via the cone: the spherical exponent of g at dimension
/// d is n - t for the same t, certified by running the Euclidean
/// certificate on the cone at dimension d + 1. Certified cone exponents
/// always agree with n - t because the (d+2)-core of the cone is the cone
/// over the (d+1)-core.
pub fn spherical_count(g: &Graph, d: usize, seed: u64) -> CountCertificate {
    assert!(d >= 1, "d must be positive");
    let n = g.vertex_count();
    let t = k_core(g, d + 1).survivors.len();
    let cone_cert = certify_count(&g.cone(), d + 1, seed);
    let mut evidence = cone_cert.evidence;
    let status = cone_cert.status;
    let exponent = if status.is_certified() {
        let cone_exponent = cone_cert.exponent.expect("certified implies exponent");
        let coherent = cone_exponent == n - t;
        evidence.push(EvidenceItem {
            check: CheckName::ConeExponentCoherence,
            passed: coherent,
            detail: format!("cone exponent {cone_exponent}, spherical exponent {}", n - t),
        });
        if !coherent {
            return CountCertificate {
                status: CertificateStatus::Inconclusive,
                d,
                exponent: None,
                evidence,
            };
        }
        Some(n - t)
    } else {
        None
    };
    CountCertificate { status, d, exponent, evidence }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> Graph {
        Graph::new(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4)]).unwrap()
    }

    /// K_4 with a chain of `len` degree-2 attachments, each new vertex on
    /// the previous one and a K_4 vertex.
    fn k4_chain(len: usize) -> Graph {
        let mut edges = Graph::complete(4).edges();
        for i in 0..len {
            let v = 4 + i;
            let a = if i == 0 { 0 } else { v - 1 };
            let b = (1 + i) % 4;
            edges.push((a, v));
            edges.push((b, v));
        }
        Graph::new(4 + len, &edges).unwrap()
    }

    #[test]
    fn predicted_counts() {
        // K_4 plus one 0-extension: doubling once.
        let g = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (1, 4)])
            .unwrap();
        assert_eq!(predicted_count(&g, 2), BigUint::from(2u32));
        assert_eq!(predicted_count(&Graph::complete(5), 2), BigUint::from(1u32));
        // Empty 3-core: the prediction alone is 2^5; certification refuses.
        assert_eq!(predicted_count(&fig1(), 2), BigUint::from(32u32));
    }

    #[test]
    fn k4_chain_certifies_randomized() {
        let g = k4_chain(3);
        let cert = certify_count(&g, 2, 1);
        assert_eq!(cert.status, CertificateStatus::CertifiedRandomized);
        assert_eq!(cert.exponent, Some(3));
        assert_eq!(cert.certified_count(), Some(BigUint::from(8u32)));
    }

    #[test]
    fn fig1_is_inconclusive() {
        let cert = certify_count(&fig1(), 2, 1);
        assert_eq!(cert.status, CertificateStatus::Inconclusive);
        assert_eq!(cert.exponent, None);
        assert!(cert.first_failed().is_some());
    }

    #[test]
    fn complete_graph_certifies_deterministically_at_d1() {
        let cert = certify_count(&Graph::complete(7), 1, 1);
        assert_eq!(cert.status, CertificateStatus::CertifiedDeterministic);
        assert_eq!(cert.exponent, Some(0));
    }

    #[test]
    fn k8_with_one_extension_certifies_deterministically_at_d2() {
        let mut edges = Graph::complete(8).edges();
        edges.extend([(0, 8), (1, 8)]);
        let g = Graph::new(9, &edges).unwrap();
        let cert = certify_count(&g, 2, 1);
        assert_eq!(cert.status, CertificateStatus::CertifiedDeterministic);
        assert_eq!(cert.exponent, Some(1));
    }

    #[test]
    fn low_degree_refutes() {
        // Pendant vertex at d = 2: infinitely many realisations.
        let mut edges = Graph::complete(4).edges();
        edges.push((0, 4));
        let g = Graph::new(5, &edges).unwrap();
        let cert = certify_count(&g, 2, 1);
        assert_eq!(cert.status, CertificateStatus::Refuted);
    }

    #[test]
    fn certified_matches_prediction() {
        let g = k4_chain(2);
        let cert = certify_count(&g, 2, 1);
        assert!(cert.status.is_certified());
        assert_eq!(cert.certified_count().unwrap(), predicted_count(&g, 2));
    }

    #[test]
    fn spherical_examples() {
        // 2-core of K_4 is K_4 itself: exponent 0.
        let cert = spherical_count(&Graph::complete(4), 1, 1);
        assert!(cert.status.is_certified());
        assert_eq!(cert.exponent, Some(0));
        // Triangle plus pendant: 2-core is the triangle.
        let g = Graph::new(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap();
        let cert = spherical_count(&g, 1, 1);
        assert!(cert.status.is_certified());
        assert_eq!(cert.exponent, Some(1));
    }

    #[test]
    fn exponent_never_grows_when_core_edges_are_added() {
        for seed in 0..30u64 {
            let g = crate::random::sample_gnp(12, 0.4, seed).unwrap();
            let t_before = k_core(&g, 3).survivors.len();
            for u in 0..12 {
                for v in (u + 1)..12 {
                    if !g.has_edge(u, v) {
                        let t_after = k_core(&g.add_edge(u, v).unwrap(), 3).survivors.len();
                        assert!(t_after >= t_before);
                    }
                }
            }
        }
    }
}
