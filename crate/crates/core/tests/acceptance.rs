//! Acceptance suite. Each test covers one numbered criterion and prints a
//! `[PASS] criterion N` line (visible with `--nocapture`).
//!
//! Run with: cargo test -p synergy-core --test acceptance -- --nocapture

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use synergy_core::correlate::{midranks, rank_correlations};
use synergy_core::decompose::{assemble_report, decompose, share_above_group, CategorizedRecord};
use synergy_core::entropy::{Axis, Codebook, ContingencyTensor, InformationValue};
use synergy_core::ingest::{parse_records, ColumnSchema, IssueReason};
use synergy_core::oracle::oracle_transmission3;
use synergy_core::pipeline::{run_pipeline, AnalysisConfig};
use synergy_core::synth::{generate_dataset, records_to_csv_string, PopulationSpec, RegionSpec, SamplingMode};
use synergy_core::taxonomy::{SectorClass, SectorScheme, SizeClassScheme};

fn pass(n: u32, what: &str) {
    println!("[PASS] criterion {n}: {what}");
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Random triples: up to 5 categories per axis, up to `max_records` records.
fn random_triples(rng: &mut ChaCha8Rng, max_records: u64) -> Vec<(String, String, String)> {
    let dims = [
        rng.next_u64() % 5 + 1,
        rng.next_u64() % 5 + 1,
        rng.next_u64() % 5 + 1,
    ];
    let count = rng.next_u64() % max_records + 1;
    (0..count)
        .map(|_| {
            (
                format!("g{}", rng.next_u64() % dims[0]),
                format!("o{}", rng.next_u64() % dims[1]),
                format!("t{}", rng.next_u64() % dims[2]),
            )
        })
        .collect()
}

fn as_refs(triples: &[(String, String, String)]) -> impl Iterator<Item = (&str, &str, &str)> {
    triples
        .iter()
        .map(|(g, o, t)| (g.as_str(), o.as_str(), t.as_str()))
}

#[test]
fn criterion_1_oracle_equivalence_over_500_seeded_datasets() {
    let started = Instant::now();
    for seed in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let triples = random_triples(&mut rng, 200);
        let tensor = ContingencyTensor::from_triples(as_refs(&triples)).unwrap();
        let fast = tensor.transmission3().unwrap().bits();
        let slow = oracle_transmission3(as_refs(&triples)).unwrap();
        assert!(
            (fast - slow).abs() < 1e-12,
            "seed {seed}: tensor {fast} vs oracle {slow}"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    pass(1, "tensor and oracle transmissions agree within 1e-12 on 500 seeded datasets");
}

fn two_label_region(city: &str, count: u64, joint: Vec<Vec<f64>>) -> RegionSpec {
    RegionSpec {
        province: "Zhejiang".into(),
        prefecture: city.into(),
        city: city.into(),
        count,
        size_labels: vec!["10-19".into(), "100-199".into()],
        tech_labels: vec!["21".into(), "26".into()],
        joint: Some(joint),
        size_marginal: None,
        tech_marginal: None,
    }
}

/// Categorize generated records the way the pipeline does at 2 tech digits.
fn categorize(records: &[synergy_core::ingest::FirmRecord]) -> Vec<(String, String, String)> {
    let sizes = SizeClassScheme::bundled();
    records
        .iter()
        .map(|r| {
            (
                r.city_raw.clone(),
                sizes
                    .size_class(r.employees.map(|e| e as i64))
                    .unwrap()
                    .to_string(),
                r.nace[..2].to_string(),
            )
        })
        .collect()
}

fn measure(spec: &PopulationSpec) -> f64 {
    let records = generate_dataset(spec).unwrap();
    let triples = categorize(&records);
    ContingencyTensor::from_triples(as_refs(&triples))
        .unwrap()
        .transmission3()
        .unwrap()
        .millibits()
}

#[test]
fn criterion_2_analytic_anchors_from_exact_quota_data() {
    let parity = PopulationSpec {
        seed: 21,
        year: 2009,
        mode: SamplingMode::Quota,
        regions: vec![
            two_label_region("Hangzhou", 500, vec![vec![0.5, 0.0], vec![0.0, 0.5]]),
            two_label_region("Ningbo", 500, vec![vec![0.0, 0.5], vec![0.5, 0.0]]),
        ],
    };
    let parity_mbit = measure(&parity);
    assert!(
        (parity_mbit + 1000.0).abs() < 1e-9,
        "parity anchor {parity_mbit}"
    );

    let redundant = PopulationSpec {
        seed: 22,
        year: 2009,
        mode: SamplingMode::Quota,
        regions: vec![
            two_label_region("Hangzhou", 500, vec![vec![1.0, 0.0], vec![0.0, 0.0]]),
            two_label_region("Ningbo", 500, vec![vec![0.0, 0.0], vec![0.0, 1.0]]),
        ],
    };
    let redundant_mbit = measure(&redundant);
    assert!(
        (redundant_mbit - 1000.0).abs() < 1e-9,
        "redundancy anchor {redundant_mbit}"
    );

    let independent = PopulationSpec {
        seed: 23,
        year: 2009,
        mode: SamplingMode::Quota,
        regions: vec![
            two_label_region("Hangzhou", 500, vec![vec![0.25, 0.25], vec![0.25, 0.25]]),
            two_label_region("Ningbo", 500, vec![vec![0.25, 0.25], vec![0.25, 0.25]]),
        ],
    };
    let independent_mbit = measure(&independent);
    assert!(
        independent_mbit.abs() < 1e-9,
        "independence anchor {independent_mbit}"
    );
    pass(2, "parity -1000.00 mbit, redundancy +1000.00 mbit, independence 0.00 mbit");
}

#[test]
fn criterion_3_conditional_identity_on_100_random_tensors() {
    for seed in 1000..1100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let triples = random_triples(&mut rng, 120);
        let tensor = ContingencyTensor::from_triples(as_refs(&triples)).unwrap();
        let t3 = tensor.transmission3().unwrap().bits();
        for (pair, given) in [
            ((Axis::Geo, Axis::Org), Axis::Tech),
            ((Axis::Geo, Axis::Tech), Axis::Org),
            ((Axis::Org, Axis::Tech), Axis::Geo),
        ] {
            let t2 = tensor.transmission2(pair).unwrap().bits();
            let cond = tensor.conditional_transmission2(pair, given).unwrap().bits();
            assert!(
                (t3 - (t2 - cond)).abs() < 1e-9,
                "seed {seed} axes {pair:?}|{given:?}"
            );
        }
    }
    pass(3, "T_XYZ = T_XY - T_XY|Z for 100 tensors and all axis assignments");
}

/// Published provincial contributions: (province, firm count, delta mbit).
const PROVINCIAL_FIXTURE: [(&str, u64, f64); 31] = [
    ("Jiangsu", 62_805, -12.48),
    ("Shandong", 35_152, -12.23),
    ("Guangdong", 44_692, -10.99),
    ("Zhejiang", 50_699, -10.92),
    ("Beijing", 17_490, -8.68),
    ("Hunan", 12_019, -8.38),
    ("Shanghai", 23_049, -7.93),
    ("Hubei", 8_969, -7.39),
    ("Sichuan", 7_807, -7.34),
    ("Liaoning", 15_565, -7.25),
    ("Anhui", 13_275, -6.98),
    ("Henan", 10_899, -6.62),
    ("Heilongjiang", 9_993, -5.99),
    ("Hebei", 7_062, -5.82),
    ("Chongqing", 6_015, -5.70),
    ("Fujian", 16_001, -5.59),
    ("Jilin", 6_190, -5.09),
    ("Jiangxi", 5_790, -4.01),
    ("Guangxi", 3_888, -3.33),
    ("Shanxi", 2_363, -2.72),
    ("Tianjin", 6_132, -2.69),
    ("Nei Mongol", 2_605, -2.37),
    ("Guizhou", 1_695, -2.11),
    ("Xinjiang Uygur", 1_625, -2.05),
    ("Shaanxi", 2_868, -1.92),
    ("Gansu", 1_510, -1.82),
    ("Yunnan", 1_707, -1.72),
    ("Hainan", 431, -0.54),
    ("Ningxia Hui", 409, -0.29),
    ("Qinghai", 254, -0.08),
    ("Xizang", 67, 0.01),
];

#[test]
fn criterion_4_decomposition_fixture_replay() {
    let rows: Vec<(String, u64, InformationValue)> = PROVINCIAL_FIXTURE
        .iter()
        .map(|(label, n, mbit)| {
            (label.to_string(), *n, InformationValue::from_millibits(*mbit))
        })
        .collect();
    let report = assemble_report(
        InformationValue::from_millibits(-196.48),
        &rows,
        "provincial fixture",
    )
    .unwrap();

    assert_eq!(report.n_total, 379_026);
    assert_eq!(round2(report.sum_delta_t.millibits()), -161.02);
    assert_eq!(round2(report.t0.millibits()), -35.46);
    let share = report.share_above_group.unwrap();
    assert!((share - 18.0).abs() <= 0.05, "share {share}");
    // most negative contribution first, smallest last
    assert_eq!(report.groups.first().unwrap().label, "Jiangsu");
    assert_eq!(report.groups.last().unwrap().label, "Xizang");

    // second administrative level: within-level contributions against the
    // level's pooled total
    let level2_share = share_above_group(
        InformationValue::from_millibits(-40.84),
        InformationValue::from_millibits(-183.42),
    )
    .unwrap();
    assert!((level2_share - 22.3).abs() <= 0.05, "share {level2_share}");
    pass(4, "fixture replay: sum -161.02, T0 -35.46, shares 18.0% and 22.3%");
}

#[test]
fn criterion_5_invariance_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let triples = random_triples(&mut rng, 80);
        let tensor = ContingencyTensor::from_triples(as_refs(&triples)).unwrap();
        let base = tensor.transmission3().unwrap().bits();

        // (a) axis permutation
        let swapped = ContingencyTensor::from_triples(
            as_refs(&triples).map(|(g, o, t)| (t, g, o)),
        )
        .unwrap();
        assert!((swapped.transmission3().unwrap().bits() - base).abs() < 1e-12);

        // (b) category relabeling
        let relabeled: Vec<(String, String, String)> = triples
            .iter()
            .map(|(g, o, t)| (format!("x-{g}"), format!("y-{o}"), format!("z-{t}")))
            .collect();
        let relabeled_tensor = ContingencyTensor::from_triples(as_refs(&relabeled)).unwrap();
        assert!((relabeled_tensor.transmission3().unwrap().bits() - base).abs() < 1e-12);

        // (c) count scaling by a positive integer
        let scaled: Vec<(String, String, String)> = triples
            .iter()
            .flat_map(|t| std::iter::repeat_n(t.clone(), 3))
            .collect();
        let scaled_tensor = ContingencyTensor::from_triples(as_refs(&scaled)).unwrap();
        assert!((scaled_tensor.transmission3().unwrap().bits() - base).abs() < 1e-12);

        // (d) zero-category padding on every axis
        let pad = |codebook: &Codebook, name: &str| {
            let mut labels: Vec<String> = codebook.labels().to_vec();
            labels.push(format!("{name}-never-observed"));
            Codebook::new(codebook.axis_name(), labels).unwrap()
        };
        let (ng, no, nt) = tensor.dims();
        let padded_books = [
            pad(tensor.codebook(Axis::Geo), "g"),
            pad(tensor.codebook(Axis::Org), "o"),
            pad(tensor.codebook(Axis::Tech), "t"),
        ];
        let mut counts = vec![0u64; (ng + 1) * (no + 1) * (nt + 1)];
        for g in 0..ng {
            for o in 0..no {
                for t in 0..nt {
                    counts[(g * (no + 1) + o) * (nt + 1) + t] = tensor.count(g, o, t);
                }
            }
        }
        let padded = ContingencyTensor::from_parts(padded_books, counts).unwrap();
        assert!((padded.transmission3().unwrap().bits() - base).abs() < 1e-12);
    }

    // decomposition unchanged under record duplication
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let records: Vec<CategorizedRecord> = random_triples(&mut rng, 200)
        .into_iter()
        .enumerate()
        .map(|(i, (g, o, t))| CategorizedRecord {
            group: format!("P{}", i % 3),
            geo: format!("P{}-{g}", i % 3),
            size: o,
            tech: t,
        })
        .collect();
    let doubled: Vec<CategorizedRecord> = records
        .iter()
        .flat_map(|r| [r.clone(), r.clone()])
        .collect();
    let a = decompose(&records, "base").unwrap();
    let b = decompose(&doubled, "doubled").unwrap();
    assert!((a.total_t.bits() - b.total_t.bits()).abs() < 1e-12);
    assert!((a.t0.bits() - b.t0.bits()).abs() < 1e-12);
    for (ga, gb) in a.groups.iter().zip(&b.groups) {
        assert_eq!(ga.label, gb.label);
        assert!((ga.delta_t.bits() - gb.delta_t.bits()).abs() < 1e-12);
    }
    pass(5, "transmission invariant under permutation/relabeling/scaling/padding; decomposition under duplication");
}

#[test]
fn criterion_6_taxonomy_conformance() {
    let sectors = SectorScheme::bundled();
    let mut first_pass = Vec::with_capacity(9999);
    for code in 1..=9999u32 {
        let text = format!("{code:04}");
        first_pass.push(sectors.classify_sector(&text).unwrap());
    }
    for (i, code) in (1..=9999u32).enumerate() {
        let text = format!("{code:04}");
        assert_eq!(sectors.classify_sector(&text).unwrap(), first_pass[i]);
    }

    for code in 1..=9999u32 {
        let text = format!("{code:04}");
        let label = sectors.classify_sector(&text).unwrap();
        let division = &text[..2];
        let group = &text[..3];
        match division {
            "21" | "26" => assert_eq!(label.class, SectorClass::HighTechManufacturing, "{text}"),
            "30" if group == "303" => {
                assert_eq!(label.class, SectorClass::HighTechManufacturing, "{text}")
            }
            "30" if group == "301" => assert_eq!(label.class, SectorClass::Other, "{text}"),
            "27" | "28" | "29" => assert_eq!(
                label.class,
                SectorClass::MediumHighTechManufacturing,
                "{text}"
            ),
            "25" if group == "254" => assert_eq!(
                label.class,
                SectorClass::MediumHighTechManufacturing,
                "{text}"
            ),
            "32" if group == "325" => assert_eq!(
                label.class,
                SectorClass::MediumHighTechManufacturing,
                "{text}"
            ),
            "62" => {
                assert_eq!(label.class, SectorClass::KnowledgeIntensiveServices, "{text}");
                assert!(label.high_tech_services, "{text}");
            }
            _ => {}
        }
        // the high-tech-services flag only ever marks knowledge-intensive codes
        if label.high_tech_services {
            assert_eq!(label.class, SectorClass::KnowledgeIntensiveServices, "{text}");
        }
    }

    let sizes = SizeClassScheme::bundled();
    assert_eq!(
        sizes.labels(),
        vec![
            "0, 1, or n.a.",
            "2-4",
            "5-9",
            "10-19",
            "20-49",
            "50-99",
            "100-199",
            "200-499",
            "500-749",
            "750-999",
            "> 1000",
        ]
    );
    for n in (0..=5000i64).chain([9999, 123_456, 10_000_000]) {
        let label = sizes.size_class(Some(n)).unwrap();
        assert!(sizes.labels().contains(&label), "count {n}");
    }
    pass(6, "all 9,999 codes classified deterministically; Table rules and 11 size classes hold");
}

#[test]
fn criterion_7_correlation_checks() {
    let series: Vec<(String, f64)> = [3.5, -1.0, 2.25, 8.0, 0.5]
        .iter()
        .enumerate()
        .map(|(i, &v)| (format!("r{i}"), v))
        .collect();
    let identical = rank_correlations(&series, &series).unwrap();
    assert_eq!(identical.pearson, 1.0);
    assert_eq!(identical.spearman, 1.0);

    let a: Vec<(String, f64)> = [1.0, 2.0, 3.0, 4.0]
        .iter()
        .enumerate()
        .map(|(i, &v)| (format!("r{i}"), v))
        .collect();
    let b: Vec<(String, f64)> = [1.0, 2.0, 4.0, 3.0]
        .iter()
        .enumerate()
        .map(|(i, &v)| (format!("r{i}"), v))
        .collect();
    let swapped = rank_correlations(&a, &b).unwrap();
    assert!((swapped.spearman - 0.8).abs() < 1e-12);

    // tie handling against a quadratic mid-rank oracle
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..100 {
        let len = (rng.next_u64() % 20 + 3) as usize;
        // small value pool forces ties
        let values: Vec<f64> = (0..len).map(|_| (rng.next_u64() % 6) as f64).collect();
        if values.iter().all(|v| *v == values[0]) {
            continue;
        }
        let fast = midranks(&values);
        let slow: Vec<f64> = values
            .iter()
            .map(|&v| {
                let less = values.iter().filter(|&&w| w < v).count();
                let equal = values.iter().filter(|&&w| w == v).count();
                (2 * less + equal + 1) as f64 / 2.0
            })
            .collect();
        assert_eq!(fast, slow, "case {case}: {values:?}");
    }
    pass(7, "exact unit correlations, rho 0.8 on the single swap, mid-ranks match brute force");
}

#[test]
fn criterion_8_scale_and_determinism() {
    // 40 cities x 10,000 firms = 400,000 records across 15 provinces
    let cities = [
        "Hangzhou", "Ningbo", "Wenzhou", "Yiwu", "Nanjing", "Suzhou", "Kunshan", "Wuxi",
        "Jinan", "Qingdao", "Yantai", "Weifang", "Dezhou", "Guangzhou", "Shenzhen", "Dongguan",
        "Foshan", "Beijing", "Haidian", "Chaoyang", "Shanghai", "Pudong", "Tianjin", "Binhai",
        "Chongqing", "Wanzhou", "Changsha", "Hengyang", "Wuhan", "Yichang", "Chengdu", "Deyang",
        "Shenyang", "Dalian", "Hefei", "Zhengzhou", "Luoyang", "Harbin", "Shijiazhuang",
        "Fuzhou",
    ];
    let size_labels: Vec<String> = ["10-19", "20-49", "100-199", "> 1000"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let tech_labels: Vec<String> = ["21", "26", "28", "62"].iter().map(|s| s.to_string()).collect();
    let regions: Vec<RegionSpec> = cities
        .iter()
        .enumerate()
        .map(|(i, city)| {
            // vary the joint structure from city to city
            let bias = (i % 4) as f64 * 0.05;
            let size_marginal = vec![0.25 + bias, 0.25 - bias, 0.25 + bias, 0.25 - bias];
            let tech_marginal = vec![0.4 - bias, 0.2 + bias, 0.2, 0.2];
            RegionSpec {
                province: String::new(), // resolved from the bundled hierarchy
                prefecture: String::new(),
                city: city.to_string(),
                count: 10_000,
                size_labels: size_labels.clone(),
                tech_labels: tech_labels.clone(),
                joint: None,
                size_marginal: Some(size_marginal),
                tech_marginal: Some(tech_marginal),
            }
        })
        .collect();
    let spec = PopulationSpec {
        seed: 400_000,
        year: 2009,
        mode: SamplingMode::Quota,
        regions,
    };
    let records = generate_dataset(&spec).unwrap();
    assert_eq!(records.len(), 400_000);

    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("firms.csv");
    fs::write(&input, records_to_csv_string(&records).unwrap()).unwrap();

    let run = |name: &str, threads: Option<usize>| -> (Vec<(String, String)>, f64) {
        let out_dir = dir.path().join(name);
        let config = AnalysisConfig {
            years: 2008..=2010,
            threads,
            ..AnalysisConfig::new(vec![input.clone()], out_dir)
        };
        let started = Instant::now();
        let outcome = run_pipeline(&config).unwrap();
        let elapsed = started.elapsed().as_secs_f64();
        let mut files: Vec<(String, String)> = outcome
            .written
            .iter()
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    fs::read_to_string(p).unwrap(),
                )
            })
            .collect();
        files.sort();
        (files, elapsed)
    };

    let (first, elapsed) = run("t1", Some(1));
    assert!(elapsed < 10.0, "single-thread run took {elapsed:.2}s");
    let (second, _) = run("t2", Some(2));
    let (third, _) = run("t8", Some(8));
    let (repeat, _) = run("t1-again", Some(1));
    assert_eq!(first, second, "1 vs 2 threads");
    assert_eq!(first, third, "1 vs 8 threads");
    assert_eq!(first, repeat, "consecutive runs");
    pass(8, &format!("400k records in {elapsed:.2}s; outputs byte-identical across 1/2/8 threads and reruns"));
}

#[test]
fn criterion_9_ingestion_accounting_with_injected_defects() {
    let mut rows = vec![
        "firm_id,year,city,nace,employees".to_string(),
    ];
    // 40 valid rows
    for i in 0..40 {
        rows.push(format!("F{i},2009,Hangzhou,2110,{}", i * 7 % 300));
    }
    // injected defects, one per reason
    rows.push("B1,2009,,2110,5".to_string()); // missing city
    rows.push("B2,2009,Beijing,,5".to_string()); // invalid NACE: empty
    rows.push("B3,2009,Beijing,ab12,5".to_string()); // invalid NACE: non-numeric
    rows.push("B4,2009,Beijing,12345,5".to_string()); // invalid NACE: 5 digits
    rows.push("B5,2009,Beijing,2110,-3".to_string()); // negative employees
    rows.push("B6,not-a-year,Beijing,2110,5".to_string()); // unparseable year
    rows.push("B7,2009,Beijing,2110,many".to_string()); // unparseable employees
    rows.push("B8,2009,Beijing,2110".to_string()); // wrong field count
    let csv = rows.join("\n") + "\n";

    let (records, issues) = parse_records(csv.as_bytes(), &ColumnSchema::canonical()).unwrap();
    let parsed_rows = rows.len() - 1;
    assert_eq!(records.len() + issues.len(), parsed_rows);
    assert_eq!(records.len(), 40);
    assert_eq!(issues.len(), 8);

    let count = |reason: IssueReason| issues.iter().filter(|i| i.reason == reason).count();
    assert_eq!(count(IssueReason::MissingCity), 1);
    assert_eq!(count(IssueReason::InvalidNace), 3);
    assert_eq!(count(IssueReason::NegativeEmployees), 1);
    assert_eq!(count(IssueReason::UnparseableRow), 3);
    // no record with an invalid NACE survived
    assert!(records.iter().all(|r| !r.nace.is_empty()
        && r.nace.chars().all(|c| c.is_ascii_digit())
        && (2..=4).contains(&r.nace.len())));
    pass(9, "included + issues = parsed rows; every defect reason enumerated");
}

/// The audit block reconciles at pipeline level too, including filters.
#[test]
fn criterion_9b_pipeline_audit_reconciles() {
    let dir = tempfile::tempdir().unwrap();
    let csv = "firm_id,year,city,nace,employees\n\
               F1,2009,Hangzhou,2110,20\n\
               F2,2009,Hangzhou,2611,120\n\
               F3,2009,Ningbo,2110,120\n\
               F4,2009,Ningbo,2611,20\n\
               F5,2007,Ningbo,2611,20\n\
               F6,2009,Atlantis,2110,20\n\
               F7,2009,Beijing,,20\n\
               F8,2009,Beijing,0111,20\n";
    let input = dir.path().join("firms.csv");
    fs::write(&input, csv).unwrap();
    let config = AnalysisConfig {
        years: 2008..=2010,
        sector: synergy_core::pipeline::SectorFilter::HighMediumTech,
        ..AnalysisConfig::new(vec![input], dir.path().join("out"))
    };
    let outcome = run_pipeline(&config).unwrap();
    let audit = &outcome.audit;
    assert_eq!(audit.parsed_rows, 8);
    assert_eq!(audit.n_used + audit.excluded_total(), audit.parsed_rows);
    assert_eq!(audit.exclusions["invalid NACE"], 1);
    assert_eq!(audit.exclusions["outside year window"], 1);
    assert_eq!(audit.exclusions["unresolved geography"], 1);
    assert_eq!(audit.exclusions["outside sector filter"], 1);
    assert_eq!(audit.n_used, 4);

    let audit_path: PathBuf = dir.path().join("out/audit.json");
    let text = fs::read_to_string(audit_path).unwrap();
    assert!(text.contains("\"parsed_rows\": 8"));
}
