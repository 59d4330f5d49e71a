//! Acceptance suite: one pass/fail line per criterion, computed end to end from the three
//! surfaces and the Enriques quotient. Expected numbers come from the bundled reference
//! data; the property criterion uses independent oracles only.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use k3aut::certify::{self, Certificate};
use k3aut::fixtures::Reference;
use k3aut::pipeline::{self, RunOptions};
use k3aut::report;
use k3aut::verify;
use k3aut_core::arith::{self, ZMat, ZVec};
use k3aut_core::borcherds::GenerationResult;
use k3aut_core::enriques::{self, EnriquesResult};
use k3aut_core::enumeration;
use k3aut_core::groups::{spanning_orbit_points, MatrixGroup};
use k3aut_core::k3::{self, AdeType, GroupName, SurfaceConfig};
use k3aut_core::lattice_core::{a_gram, d_gram, direct_sum, IntegerLattice};

struct Outcome {
    passed: bool,
    detail: String,
}

/// Collects named sub-checks; the criterion passes when all of them do.
#[derive(Default)]
struct Tally {
    failures: Vec<String>,
    checked: usize,
}

impl Tally {
    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failures.push(name.into());
        }
    }

    fn outcome(self, summary: &str) -> Outcome {
        if self.failures.is_empty() {
            Outcome {
                passed: true,
                detail: format!("{summary} ({} checks)", self.checked),
            }
        } else {
            Outcome {
                passed: false,
                detail: format!(
                    "{} of {} checks failed: {}",
                    self.failures.len(),
                    self.checked,
                    self.failures.join("; ")
                ),
            }
        }
    }
}

fn reference() -> &'static Reference {
    static R: OnceLock<Reference> = OnceLock::new();
    R.get_or_init(Reference::bundled)
}

fn generation(k: usize) -> &'static GenerationResult {
    static G: [OnceLock<GenerationResult>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    G[k].get_or_init(|| {
        let t = Instant::now();
        let r = pipeline::generate(k, &RunOptions::default()).expect("generation succeeds");
        eprintln!("  (surface {k} generated in {:.0?})", t.elapsed());
        r
    })
}

fn enriques_result() -> &'static EnriquesResult {
    static E: OnceLock<EnriquesResult> = OnceLock::new();
    E.get_or_init(|| pipeline::enriques(generation(0), reference()).expect("descent succeeds"))
}

fn sorted<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort();
    v
}

// ---------------------------------------------------------------------------

fn orbit_rows_match() -> Outcome {
    let mut t = Tally::default();
    type Row = (usize, String, i64, Option<[usize; 4]>, Option<i64>);
    for k in 0..3 {
        let got: Vec<Row> = generation(k)
            .orbits
            .iter()
            .map(|o| {
                let inv = o
                    .crossing
                    .as_ref()
                    .map(|c| [c.split.total(), c.split.symplectic, c.split.enriques, c.split.rational]);
                (
                    o.size,
                    o.norm.to_string(),
                    o.ample_pairing,
                    inv,
                    o.crossing.as_ref().map(|c| c.ample_image_pairing),
                )
            })
            .collect();
        let want: Vec<Row> = reference().orbit_table[&k.to_string()]
            .iter()
            .map(|r| {
                (
                    r.size,
                    r.norm.clone(),
                    r.ample_pairing,
                    r.involutions,
                    r.ample_image_pairing,
                )
            })
            .collect();
        t.check(
            format!("surface {k}: orbit count {} vs {}", got.len(), want.len()),
            got.len() == want.len(),
        );
        let (got, want) = (sorted(&got), sorted(&want));
        for w in &want {
            t.check(format!("surface {k}: row {w:?}"), got.contains(w));
        }
        t.check(format!("surface {k}: rows"), got == want);
    }
    t.outcome("13 + 14 + 8 orbit rows match in size, norm, ⟨a,v⟩, involution split and ⟨a',a⟩")
}

/// The alternating group of degree 6 as even permutation matrices, as an independent oracle
/// for the symplectic subgroups.
fn alternating6_classes() -> Vec<(usize, usize)> {
    let perm = |p: [usize; 6]| -> ZMat { (0..6).map(|i| (0..6).map(|j| i64::from(p[i] == j)).collect()).collect() };
    let gens = [perm([1, 2, 0, 3, 4, 5]), perm([0, 2, 3, 4, 5, 1])];
    let pts = spanning_orbit_points(&gens, 6);
    let g = MatrixGroup::generate(&gens, &pts, 6).expect("permutation group");
    assert_eq!(g.order(), 360);
    k3::group_fingerprint(&g).classes
}

fn group_orders_and_names() -> Outcome {
    let mut t = Tally::default();
    let a6 = alternating6_classes();
    let g0 = generation(0).aut_group().expect("closed");
    let f0 = k3::group_fingerprint(&g0);
    t.check(format!("|Aut(X0,a0)| = {}", f0.order), f0.order == 1440);
    t.check(format!("center order {}", f0.center_order), f0.center_order == 2);
    let eps = enriques::central_enriques_involution(&SurfaceConfig::new(0), generation(0))
        .ok()
        .flatten();
    t.check("center generated by an Enriques involution", eps.is_some());
    t.check(
        "central involution equals the reference one",
        eps.as_ref() == Some(&reference().enriques_involution_x0),
    );
    for k in 1..3 {
        let g = generation(k).aut_group().expect("closed");
        let f = k3::group_fingerprint(&g);
        t.check(format!("|Aut(X{k},a{k})| = {}", f.order), f.order == 720);
        t.check(
            format!("surface {k} named {:?}", f.name),
            f.name == Some(GroupName::Pgl2F9),
        );
    }
    for k in 0..3 {
        let s = generation(k).symplectic_subgroup().expect("subgroup");
        let f = k3::group_fingerprint(&s);
        t.check(
            format!("surface {k}: symplectic subgroup order {}", f.order),
            f.order == 360,
        );
        t.check(
            format!("surface {k}: symplectic subgroup classes are those of A6"),
            f.classes == a6,
        );
    }
    t.outcome("orders 1440/720/720, center ⟨Enriques involution⟩, PGL2(F9) for k=1,2, symplectic subgroups ≅ A6 by class table")
}

fn base_involution_counts() -> Outcome {
    let mut t = Tally::default();
    let want = [(91, 45, 1, 45), (81, 45, 0, 36), (81, 45, 0, 36)];
    for (k, w) in want.iter().enumerate() {
        let s = generation(k).base_split;
        let got = (s.total(), s.symplectic, s.enriques, s.rational);
        t.check(format!("surface {k}: {got:?}"), got == *w);
    }
    t.outcome("91 = 45+1+45, 81 = 45+0+36, 81 = 45+0+36")
}

fn class_tables() -> Outcome {
    let mut t = Tally::default();
    let tables = &reference().class_tables;
    for k in 0..3 {
        let g = generation(k).aut_group().expect("closed");
        let got = k3::group_fingerprint(&g).classes;
        let want = sorted(&tables[if k == 0 { "surface0" } else { "surface1_2" }]);
        t.check(format!("surface {k}: {got:?}"), got == want);
    }
    t.outcome("(order, class size) multisets equal for all three surfaces")
}

fn polarization_tables() -> Outcome {
    let mut t = Tally::default();
    for p in &reference().polarizations {
        let cfg = SurfaceConfig::new(p.k);
        let nef = k3::is_nef(&cfg, &p.h) == Ok(true);
        let pol = nef && k3::is_polarization(&cfg, &p.h) == Ok(true);
        t.check(format!("{}: nef", p.name), nef);
        t.check(
            format!("{}: degree-2 polarization", p.name),
            pol && cfg.pairing(&p.h, &p.h) == 2,
        );
        t.check(
            format!("{}: ⟨h,a⟩", p.name),
            cfg.pairing(&p.h, &cfg.ample) == p.pairing_with_ample,
        );
        let ade = k3::rational_curve_classes(&cfg, &p.h, 0)
            .ok()
            .and_then(|c| k3::ade_type(&cfg.gram, &c[0]).ok());
        t.check(
            format!(
                "{}: singularities {:?} vs {}",
                p.name,
                ade.as_ref().map(|a| a.to_string()),
                p.sing
            ),
            ade.is_some() && ade == AdeType::parse(&p.sing),
        );
    }
    t.outcome(&format!(
        "{} polarizations: nef, degree 2, ⟨h,a⟩ and ADE type",
        reference().polarizations.len()
    ))
}

fn fixture_membership() -> Outcome {
    let mut t = Tally::default();
    let g0 = generation(0).aut_group().expect("closed");
    let checks = verify::verify(reference(), Some(&g0));
    for c in &checks {
        t.check(format!("{}: {}", c.id, c.detail), c.passed);
    }
    t.outcome("published matrices are isometries of the claimed order, type and membership")
}

fn section9_numerics() -> Outcome {
    let mut t = Tally::default();
    let r = reference();
    let (c0, c1, c2) = (SurfaceConfig::new(0), SurfaceConfig::new(1), SurfaceConfig::new(2));

    // quartic model of surface 0
    let q = &r.quartic_h;
    let rho = &r.order4_x0;
    t.check("quartic class has norm 4", c0.pairing(q, q) == 4);
    t.check("quartic class is invariant", arith::vec_mat(q, rho) == *q);
    t.check(
        "quartic class is a polarization",
        k3::is_polarization(&c0, q) == Ok(true),
    );
    t.check(
        "quartic class is not hyperelliptic",
        k3::is_hyperelliptic_deg4(&c0, q) == Ok(false),
    );
    match k3::line_configuration(&c0, q, std::slice::from_ref(rho)) {
        Ok(lc) => {
            t.check(format!("quartic nodes {}", lc.ade), lc.ade.to_string() == "6A1");
            let mut node_orbits: Vec<usize> = Vec::new();
            let mut seen: Vec<ZVec> = Vec::new();
            for n in &lc.contracted {
                if seen.contains(n) {
                    continue;
                }
                let mut orbit = vec![n.clone()];
                loop {
                    let next = arith::vec_mat(orbit.last().unwrap(), rho);
                    if next == *n {
                        break;
                    }
                    orbit.push(next);
                }
                node_orbits.push(orbit.len());
                seen.extend(orbit);
            }
            node_orbits.sort();
            t.check(format!("node orbits {node_orbits:?}"), node_orbits == [2, 4]);
            let orbit_sizes: Vec<usize> = lc.line_orbits.iter().map(Vec::len).collect();
            t.check(format!("{} lines", lc.lines.len()), lc.lines.len() == 36);
            t.check(format!("line orbits {orbit_sizes:?}"), orbit_sizes == vec![4; 9]);
            t.check("quartic configuration is full", lc.spans_full);
            let m = k3::match_cyclic_pattern(&c0, &lc, rho, &r.quartic_pattern.to_core());
            t.check("cyclic pairing matrices reproduced by a labelling", m.is_some());
        }
        Err(e) => t.check(format!("quartic line configuration: {e}"), false),
    }

    // splitting lines of double planes
    let split = |cfg: &SurfaceConfig, h: &ZVec| k3::line_configuration(cfg, h, &[]).ok();
    for name in ["h0_1", "h0_2", "h0_3"] {
        let lc = split(&c0, &r.polarization(name).unwrap().h);
        t.check(
            format!("{name}: 19 splitting lines"),
            lc.as_ref().and_then(|l| l.splitting_lines) == Some(19),
        );
        t.check(format!("{name}: full"), lc.as_ref().is_some_and(|l| l.spans_full));
    }
    let lc = split(&c0, &r.polarization("tlh0_1").unwrap().h);
    t.check(
        "tlh0_1: 24 splitting lines",
        lc.and_then(|l| l.splitting_lines) == Some(24),
    );
    let lc = split(&c1, &r.h_sigma_x1);
    t.check(
        "h_sigma: 10 splitting lines, 7 cusps",
        lc.is_some_and(|l| l.splitting_lines == Some(10) && l.ade.to_string() == "7A2"),
    );

    // double planes with singularities 2A9
    for (cfg, name) in [(&c1, "tlh1_11"), (&c1, "tlh1_12"), (&c2, "tlh2_6"), (&c2, "tlh2_7")] {
        let h = &r.polarization(name).unwrap().h;
        let iota = k3::double_plane_involution(cfg, h);
        let lc = iota
            .as_ref()
            .ok()
            .and_then(|i| k3::line_configuration(cfg, h, std::slice::from_ref(i)).ok());
        match lc {
            Some(lc) => {
                let mut sizes: Vec<usize> = lc.line_orbits.iter().map(Vec::len).collect();
                sizes.sort();
                t.check(format!("{name}: 2A9"), lc.ade.to_string() == "2A9");
                t.check(
                    format!("{name}: 3 lines in orbits 1+2"),
                    lc.lines.len() == 3 && sizes == [1, 2],
                );
                t.check(format!("{name}: not full"), !lc.spans_full);
            }
            None => t.check(format!("{name}: configuration"), false),
        }
    }

    // two polarizations with one involution
    let ade = |h: &ZVec| {
        k3::line_configuration(&c2, h, &[])
            .map(|l| l.ade.to_string())
            .unwrap_or_default()
    };
    t.check("h': E6+A11", ade(&r.h_prime_x2) == "E6+A11");
    t.check("h'': A15+A3", ade(&r.h_second_x2) == "A15+A3");
    let a = k3::double_plane_involution(&c2, &r.h_prime_x2);
    let b = k3::double_plane_involution(&c2, &r.h_second_x2);
    t.check("h' and h'' give the same involution", a.is_ok() && a == b);
    t.outcome("quartic model, splitting lines 19/24/10, 2A9 cases, h'/h''")
}

fn enriques_pipeline() -> Outcome {
    let mut t = Tally::default();
    let r = reference();
    let e = enriques_result();
    let mut kernel = vec![arith::identity(20), r.enriques_involution_x0.clone()];
    kernel.sort();
    t.check(
        "kernel of the descent is generated by the involution",
        e.kernel == kernel,
    );
    t.check("1440 elements scanned", generation(0).aut.len() == 1440);
    t.check(
        format!("interior point {:?}", e.chamber.interior),
        e.chamber.interior == [122, 60, -105, -136, -92, -182, -270, -168, -114, -58],
    );
    let sizes: Vec<usize> = e.chamber.orbits.iter().map(Vec::len).collect();
    t.check(
        format!("{} walls in orbits {sizes:?}", e.chamber.walls.len()),
        e.chamber.walls.len() == 40 && sizes == [30, 10],
    );
    t.check(
        "large orbit equals the reference",
        e.chamber.orbit_vectors[0] == sorted(&r.enriques_orbit_large),
    );
    t.check(
        "small orbit equals the reference",
        e.chamber.orbit_vectors[1] == sorted(&r.enriques_orbit_small),
    );
    t.check(
        format!("group order {}", e.fingerprint.order),
        e.fingerprint.order == 720,
    );
    t.check(
        "class table",
        e.fingerprint.classes == sorted(&r.class_tables["enriques"]),
    );
    t.check(
        "non-split: involutions lie in the image of the symplectic subgroup",
        e.involutions_in_symplectic_image,
    );
    t.check("named M10", enriques::is_mathieu_certified(e));
    let want: Vec<&ZMat> = [
        "order4",
        "double_plane_h0_1",
        "double_plane_h0_2",
        "double_plane_h0_3",
        "double_plane_tlh0_3",
    ]
    .iter()
    .map(|n| &r.enriques_generators[*n])
    .collect();
    t.check(
        "generators equal the reference descent images",
        e.generators.iter().collect::<Vec<_>>() == want,
    );
    let wall = arith::solve_left_integer(&e.lattice.gram, &e.crossing_wall);
    t.check(
        format!("crossing wall {wall:?} in the small orbit"),
        wall.as_ref().is_some_and(|w| r.enriques_orbit_small.contains(w)),
    );
    for c in certify::enriques_certificates(e, generation(0)) {
        t.check(format!("certificate {}", c.name), c.passed);
    }
    t.outcome("kernel ⟨ε⟩, 40 = 30 + 10 walls, M10 of order 720, generators and crossing wall as published")
}

fn oracle_grams() -> Vec<ZMat> {
    vec![
        vec![vec![-2]],
        vec![vec![-10]],
        a_gram(2),
        vec![vec![-2, 1], vec![1, -12]],
        vec![vec![-4, 0], vec![0, -6]],
        a_gram(3),
        direct_sum(&[vec![vec![-2]], a_gram(2)]),
        vec![vec![-6, 2, 1], vec![2, -4, 0], vec![1, 0, -8]],
        d_gram(4),
        a_gram(4),
        direct_sum(&[vec![vec![-2]], a_gram(3)]),
        vec![
            vec![-4, 1, 1, 1],
            vec![1, -4, 1, 1],
            vec![1, 1, -4, 1],
            vec![1, 1, 1, -6],
        ],
    ]
}

fn property_suite() -> Outcome {
    let mut t = Tally::default();
    for g in oracle_grams() {
        let l = IntegerLattice::new(g.clone()).expect("valid");
        for d in 1..=12 {
            let brute = enumeration::brute_force_box(&g, enumeration::box_radius(&g, d), |x| l.norm(x) == -d);
            t.check(
                format!("enumeration {g:?} norm -{d}"),
                enumeration::short_vectors(&l, -d).ok() == Some(brute),
            );
        }
    }
    let certs: Vec<(usize, Certificate)> = (0..3)
        .flat_map(|k| {
            certify::generation_certificates(generation(k))
                .into_iter()
                .map(move |c| (k, c))
        })
        .collect();
    for (k, c) in &certs {
        if ["isometry", "weyl-vectors", "walk-involutive"].contains(&c.name.as_str()) {
            t.check(format!("surface {k}: {} ({})", c.name, c.detail), c.passed);
        }
    }
    let e = enriques_result();
    let zgram = &e.lattice.gram;
    t.check(
        "descended matrices are isometries",
        e.group
            .iter()
            .chain(&e.generators)
            .all(|m| arith::gram_of(zgram, m) == *zgram),
    );
    // determinism: the smallest surface regenerated with one and with three workers
    let reference_report = report::to_json(&report::surface_report(generation(2), Vec::new()));
    for threads in [1, 3] {
        let opts = RunOptions {
            threads: Some(threads),
            cache: None,
        };
        let again = pipeline::generate(2, &opts).map(|g| report::to_json(&report::surface_report(&g, Vec::new())));
        t.check(
            format!("report with {threads} threads is byte-identical"),
            again.ok().as_ref() == Some(&reference_report),
        );
    }
    t.outcome("box oracle on 12 lattices × norms 1..12, isometry / Weyl / walk certificates, thread-count determinism")
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    // the harness takes no arguments; any cargo passes (e.g. filters) are ignored
    let criteria: [Criterion; 9] = [
        ("wall orbit table for all three surfaces", orbit_rows_match),
        ("automorphism group orders, center and names", group_orders_and_names),
        ("involutions fixing the ample class", base_involution_counts),
        ("conjugacy class tables", class_tables),
        ("degree-2 polarization tables", polarization_tables),
        ("published matrices validate", fixture_membership),
        ("projective models: quartic, double planes", section9_numerics),
        ("Enriques quotient", enriques_pipeline),
        ("property suite", property_suite),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let line = format!(
            "criterion {}: {} — {title}: {} [{:.0?}]",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed()
        );
        println!("{line}");
        if !o.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
