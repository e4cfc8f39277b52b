use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use autolabel_core::clustering::{
    cluster_id, emit_grouped_labels, iterative_cluster, rule_features, select_in_scope,
    IterativeConfig,
};
use autolabel_core::corpus::io::{
    parse_corpus, parse_pairs_tsv, read_profiles, read_supplemental, read_to_string,
    read_truth_labels, write_corpus_tsv, write_pairs_tsv, write_truth_labels, Diagnostic,
    LABEL_HEADER, TAG_HEADER,
};
use autolabel_core::corpus::{link_authority, Corpus, TruthLabels};
use autolabel_core::disambiguator::{
    build_pairs, disambiguate, resolve_labels, sample_holdout, score_blocks, select_threshold,
    train, write_pairs, FeatureExtractor, HacConfig, ModelFile, Preprocessor, SplitConfig,
    TrainConfig,
};
use autolabel_core::evaluation::{
    block_stats, pairwise_metrics, tag_ratios, BlockStats, EvaluationReport, PowerLawFit,
};
use autolabel_core::matching::{evaluate_rule, instance_match_pairs};
use autolabel_core::synth::{generate, summarize, GenerationStats, SynthReport};

use crate::config::PipelineConfig;
use crate::output::{stamp_tsv, Cell, Format, OutputDir, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Parse the corpus, extract features, and link authority profiles.
    Ingest,
    /// Score every validation rule against truth labels.
    ValidateRules,
    /// Cluster instances iteratively and write the label file.
    Label,
    /// Train a pairwise classifier on the labels and tune its threshold.
    Train,
    /// Cluster instances with a trained model.
    Disambiguate,
    /// Score model predictions and labels against truth.
    Evaluate,
    /// Generate a synthetic corpus with truth labels.
    Synth,
    /// Block-size and tag-ratio representativeness of the labeled subset.
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Ingest => "ingest",
            Command::ValidateRules => "validate-rules",
            Command::Label => "label",
            Command::Train => "train",
            Command::Disambiguate => "disambiguate",
            Command::Evaluate => "evaluate",
            Command::Synth => "synth",
            Command::Report => "report",
        }
    }
}

/// Runs one command, writing its outputs and its manifest entry.
pub fn run(command: Command, config: &PipelineConfig, format: Format) -> Result<()> {
    config.validate()?;
    let hash = config.hash();
    let mut out = OutputDir::create(&config.output_dir, command.name(), &hash, config.seed)?;
    let ctx = Ctx {
        config,
        hash: &hash,
        format,
    };
    match command {
        Command::Ingest => ctx.ingest(&mut out)?,
        Command::ValidateRules => ctx.validate_rules(&mut out)?,
        Command::Label => ctx.label(&mut out)?,
        Command::Train => ctx.train(&mut out)?,
        Command::Disambiguate => ctx.disambiguate(&mut out)?,
        Command::Evaluate => ctx.evaluate(&mut out)?,
        Command::Synth => ctx.synth(&mut out)?,
        Command::Report => ctx.report(&mut out)?,
    }
    out.finish()
}

struct Ctx<'a> {
    config: &'a PipelineConfig,
    hash: &'a str,
    format: Format,
}

struct Loaded {
    corpus: Corpus,
    skipped_anonymous: usize,
    diagnostics: Vec<Diagnostic>,
}

#[derive(Serialize)]
struct IngestStats {
    records: usize,
    skipped_anonymous: usize,
    malformed_rows: usize,
    diagnostics: Vec<Diagnostic>,
    instances: usize,
    emails_listed: usize,
    emails_assigned: usize,
    citation_edges: usize,
    self_citation_candidates: usize,
    truth_labeled: Option<usize>,
}

#[derive(Serialize)]
struct LabelReport {
    in_scope: usize,
    clusters: usize,
    labeled_instances: usize,
    labeled_clusters: usize,
    passes: usize,
    merges: usize,
    /// Labeled instances against truth, when truth is available.
    evaluation: Option<EvaluationReport>,
}

#[derive(Serialize)]
struct TrainReport {
    classifier: String,
    labeled_instances: usize,
    holdout_excluded: usize,
    train_instances: usize,
    dev_instances: usize,
    train_pairs: usize,
    train_positive: usize,
    dev_pairs: usize,
    dev_positive: usize,
    threshold: f64,
    dev_f1: Option<f64>,
}

#[derive(Serialize)]
struct DisambiguationReport {
    classifier: String,
    model_config_hash: String,
    threshold: f64,
    instances: usize,
    clusters: usize,
}

#[derive(Serialize)]
struct SynthOutput {
    stats: GenerationStats,
    summary: SynthReport,
}

#[derive(Serialize)]
struct BlockSummary {
    blocks: usize,
    instances: usize,
    fit_range: (usize, usize),
    fit: Option<PowerLawFit>,
}

impl From<&BlockStats> for BlockSummary {
    fn from(s: &BlockStats) -> Self {
        Self {
            blocks: s.blocks,
            instances: s.instances,
            fit_range: s.fit_range,
            fit: s.fit.clone(),
        }
    }
}

#[derive(Serialize)]
struct Representativeness {
    labeled: BlockSummary,
    population: BlockSummary,
}

impl Ctx<'_> {
    fn required(&self, path: &Option<PathBuf>, key: &str) -> Result<PathBuf> {
        match path {
            Some(p) => Ok(self.config.resolve(p)),
            None => bail!("paths.{key} is not set"),
        }
    }

    /// A configured input, or `default` in the output directory.
    fn derived(&self, path: &Option<PathBuf>, default: &str) -> (PathBuf, bool) {
        match path {
            Some(p) => (self.config.resolve(p), true),
            None => (self.config.output_dir.join(default), false),
        }
    }

    fn load_corpus(&self) -> Result<Loaded> {
        let path = self.required(&self.config.paths.corpus, "corpus")?;
        let parsed = parse_corpus(&path, self.config.paths.corpus_format)?;
        let supplemental = match &self.config.paths.supplemental {
            Some(p) => read_supplemental(&self.config.resolve(p))?,
            None => Vec::new(),
        };
        let corpus = Corpus::build(parsed.records, &supplemental, &self.config.corpus)
            .with_context(|| format!("cannot build corpus from {}", path.display()))?;
        log::info!(
            "{}: {} papers, {} instances",
            path.display(),
            corpus.records().len(),
            corpus.instances().len()
        );
        Ok(Loaded {
            corpus,
            skipped_anonymous: parsed.skipped_anonymous,
            diagnostics: parsed.diagnostics,
        })
    }

    fn load_truth(&self, corpus: &Corpus) -> Result<Option<TruthLabels>> {
        let paths = &self.config.paths;
        if let Some(p) = &paths.truth {
            return Ok(Some(read_truth_labels(&self.config.resolve(p))?));
        }
        if let Some(p) = &paths.profiles {
            return Ok(Some(link_authority(
                corpus,
                &read_profiles(&self.config.resolve(p))?,
            )));
        }
        Ok(None)
    }

    fn require_truth(&self, corpus: &Corpus, command: &str) -> Result<TruthLabels> {
        self.load_truth(corpus)?.with_context(|| {
            format!("{command} needs truth labels: set paths.truth or paths.profiles")
        })
    }

    fn read_id_map(&self, path: &Path, header: &str) -> Result<Vec<(String, String)>> {
        parse_pairs_tsv(&read_to_string(path)?, Some(header))
            .with_context(|| format!("malformed {}", path.display()))
    }

    fn read_labels(&self) -> Result<Vec<(String, String)>> {
        let (path, _) = self.derived(&self.config.paths.labels, "labels.tsv");
        self.read_id_map(&path, LABEL_HEADER)
    }

    fn extractor(&self) -> Result<FeatureExtractor> {
        let preprocessor = match &self.config.paths.stopwords {
            Some(p) => Preprocessor::from_stopword_file(&self.config.resolve(p))?,
            None => Preprocessor::default(),
        };
        Ok(FeatureExtractor {
            preprocessor,
            ngrams: self.config.ml.ngrams.clone(),
        })
    }

    /// Truth-labeled instances kept out of training, or none when the
    /// hold-out is disabled.
    fn holdout(&self, corpus: &Corpus, truth: Option<&TruthLabels>) -> Result<Vec<usize>> {
        let fraction = self.config.ml.holdout_fraction;
        if fraction == 0.0 {
            return Ok(Vec::new());
        }
        let candidates: Vec<usize> = match truth {
            Some(t) => t
                .iter()
                .filter_map(|(id, _)| corpus.instance_index(id))
                .collect(),
            None => (0..corpus.instances().len()).collect(),
        };
        Ok(sample_holdout(&candidates, fraction, self.config.seed)?)
    }

    fn train_config(&self) -> TrainConfig {
        let ml = &self.config.ml;
        TrainConfig {
            logistic: ml.logistic.clone(),
            naive_bayes: ml.naive_bayes.clone(),
            forest: ml.forest.clone(),
            seed: self.config.seed,
        }
    }

    fn synth(&self, out: &mut OutputDir) -> Result<()> {
        let s = generate(&self.config.synth)?;
        let summary = summarize(&s.records, &s.truth)?;
        out.write(
            "corpus.tsv",
            &stamp_tsv(self.hash, &write_corpus_tsv(&s.records)),
        )?;
        out.write(
            "truth.tsv",
            &stamp_tsv(self.hash, &write_truth_labels(&s.truth)),
        )?;
        out.write_json(
            "synth_stats.json",
            &SynthOutput {
                stats: s.stats,
                summary,
            },
        )?;
        Ok(())
    }

    fn ingest(&self, out: &mut OutputDir) -> Result<()> {
        let loaded = self.load_corpus()?;
        let corpus = &loaded.corpus;
        let truth = self.load_truth(corpus)?;

        let mut instances = String::from(
            "instance_id\tpaper_id\tposition\tsurname\tforename\tblock_key\temail\tcoauthors\n",
        );
        for inst in corpus.instances() {
            let coauthors: Vec<String> = inst
                .coauthors
                .iter()
                .map(|c| format!("{}, {}", c.surname, c.forename))
                .collect();
            instances.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                inst.instance_id,
                inst.paper_id,
                inst.position,
                inst.name.surname,
                inst.name.forename,
                inst.block_key,
                inst.email.as_deref().unwrap_or(""),
                coauthors.join("|"),
            ));
        }
        out.write(
            "corpus.tsv",
            &stamp_tsv(self.hash, &write_corpus_tsv(corpus.records())),
        )?;
        out.write("instances.tsv", &stamp_tsv(self.hash, &instances))?;
        if let Some(t) = &truth {
            out.write("truth.tsv", &stamp_tsv(self.hash, &write_truth_labels(t)))?;
        }
        let stats = IngestStats {
            records: corpus.records().len(),
            skipped_anonymous: loaded.skipped_anonymous,
            malformed_rows: loaded.diagnostics.len(),
            diagnostics: loaded.diagnostics,
            instances: corpus.instances().len(),
            emails_listed: corpus.records().iter().map(|r| r.emails.len()).sum(),
            emails_assigned: corpus
                .instances()
                .iter()
                .filter(|i| i.email.is_some())
                .count(),
            citation_edges: corpus.citations().len(),
            self_citation_candidates: corpus.self_citations().len(),
            truth_labeled: truth.as_ref().map(TruthLabels::len),
        };
        out.write_json("ingest_stats.json", &stats)?;
        Ok(())
    }

    fn validate_rules(&self, out: &mut OutputDir) -> Result<()> {
        let corpus = self.load_corpus()?.corpus;
        let truth = self.require_truth(&corpus, "validate-rules")?;
        let mut table = Table::new(&[
            "feature",
            "scheme",
            "min_shared",
            "match_pairs",
            "evaluable_pairs",
            "true_match",
            "accuracy",
        ]);
        for rule in &self.config.validation_rules {
            let scope = select_in_scope(&corpus, &[rule.feature]);
            let ids: Vec<(&str, &str)> =
                instance_match_pairs(&corpus, &scope, rule, &self.config.match_options)
                    .into_iter()
                    .map(|(a, b)| {
                        (
                            corpus.instance(a).instance_id.as_str(),
                            corpus.instance(b).instance_id.as_str(),
                        )
                    })
                    .collect();
            let report = evaluate_rule(&ids, &truth);
            table.push(vec![
                rule.feature.as_str().into(),
                rule.scheme.as_str().into(),
                rule.min_shared.into(),
                report.match_pairs.into(),
                report.evaluable_pairs.into(),
                report.true_match.into(),
                Cell::ratio(report.accuracy),
            ]);
        }
        out.write_table("rule_accuracy", &table, self.format)?;
        Ok(())
    }

    fn label(&self, out: &mut OutputDir) -> Result<()> {
        let corpus = self.load_corpus()?.corpus;
        let truth = self.load_truth(&corpus)?;
        let rules = &self.config.rules;
        let scope = select_in_scope(&corpus, &rule_features(rules));
        let state = iterative_cluster(
            &corpus,
            &scope,
            &IterativeConfig {
                rules,
                options: self.config.match_options,
                truth: truth.as_ref(),
            },
        );
        let labels = emit_grouped_labels(&state, &corpus, self.config.label.min_cluster_size);
        let rows = labels.iter().map(|(i, c)| (i.as_str(), c.as_str()));
        out.write(
            "labels.tsv",
            &stamp_tsv(self.hash, &write_pairs_tsv(LABEL_HEADER, rows)),
        )?;

        let mut log = Table::new(&[
            "stage",
            "pass",
            "feature",
            "scheme",
            "min_shared",
            "clusters",
            "merges",
            "pP",
            "pR",
            "pF1",
        ]);
        for s in &state.stage_log {
            let mut row: Vec<Cell> = vec![
                s.stage.into(),
                s.pass.into(),
                s.feature.as_str().into(),
                s.scheme.as_str().into(),
                s.min_shared.into(),
                s.clusters.into(),
                s.merges.into(),
            ];
            match &s.evaluation {
                Some(e) => row.extend([
                    Cell::ratio(e.precision),
                    Cell::ratio(e.recall),
                    Cell::ratio(e.f1),
                ]),
                None => row.extend(std::iter::repeat_n(Cell::Text(String::new()), 3)),
            }
            log.push(row);
        }
        out.write_table("stage_log", &log, self.format)?;

        let min = self.config.label.min_cluster_size;
        let report = LabelReport {
            in_scope: scope.len(),
            clusters: state.clusters.len(),
            labeled_instances: labels.len(),
            labeled_clusters: state
                .clusters
                .iter()
                .filter(|c| c.members.len() >= min)
                .count(),
            passes: state.stage_log.last().map_or(0, |s| s.pass),
            merges: state.total_merges(),
            evaluation: truth.as_ref().map(|t| {
                pairwise_metrics(
                    labels.iter().map(|(i, c)| (i.as_str(), c.as_str())),
                    t.iter(),
                )
            }),
        };
        out.write_json("label_report.json", &report)?;
        Ok(())
    }

    fn train(&self, out: &mut OutputDir) -> Result<()> {
        let corpus = self.load_corpus()?.corpus;
        let truth = self.load_truth(&corpus)?;
        let held: HashSet<usize> = self.holdout(&corpus, truth.as_ref())?.into_iter().collect();
        let all = resolve_labels(&corpus, &self.read_labels()?)?;
        let labeled: Vec<(usize, String)> = all
            .iter()
            .filter(|(i, _)| !held.contains(i))
            .cloned()
            .collect();
        let excluded = all.len() - labeled.len();

        let extractor = self.extractor()?;
        let idx: Vec<usize> = labeled.iter().map(|(i, _)| *i).collect();
        let profiles = extractor.profiles(&corpus, &idx);
        let ml = &self.config.ml;
        let split = SplitConfig {
            train_ratio: ml.train_ratio,
            seed: self.config.seed,
        };
        let sets = build_pairs(&corpus, &labeled, &profiles, ml.blocking, &split)?;
        let train_config = self.train_config();
        let model = train(ml.classifier, &sets.train, &train_config)?;

        let dev_idx: Vec<usize> = sets.dev_instances.iter().map(|(i, _)| *i).collect();
        let blocks = score_blocks(&corpus, &dev_idx, &profiles, &model, ml.blocking);
        let grid = ml.threshold_grid.values(&blocks)?;
        let selection = select_threshold(&blocks, &sets.dev_instances, &grid)?;
        if selection.f1.is_none() {
            log::warn!(
                "no development pairs; threshold {} is a default",
                selection.config.threshold
            );
        }

        let mut file = ModelFile::new(model, train_config, self.hash.to_string());
        file.threshold = Some(selection.config.threshold);
        out.write("model.json", &file.to_json())?;
        out.write(
            "train_pairs.tsv",
            &stamp_tsv(self.hash, &write_pairs(&sets.train)),
        )?;
        out.write(
            "dev_pairs.tsv",
            &stamp_tsv(self.hash, &write_pairs(&sets.dev)),
        )?;
        let mut thresholds = Table::new(&["threshold", "pF1"]);
        for s in &selection.scores {
            thresholds.push(vec![s.threshold.into(), Cell::ratio(s.f1)]);
        }
        out.write_table("thresholds", &thresholds, self.format)?;
        let report = TrainReport {
            classifier: ml.classifier.to_string(),
            labeled_instances: all.len(),
            holdout_excluded: excluded,
            train_instances: sets.train_instances.len(),
            dev_instances: sets.dev_instances.len(),
            train_pairs: sets.train.len(),
            train_positive: sets.train.iter().filter(|p| p.positive).count(),
            dev_pairs: sets.dev.len(),
            dev_positive: sets.dev.iter().filter(|p| p.positive).count(),
            threshold: selection.config.threshold,
            dev_f1: selection.f1,
        };
        out.write_json("train_report.json", &report)?;
        Ok(())
    }

    fn disambiguate(&self, out: &mut OutputDir) -> Result<()> {
        let corpus = self.load_corpus()?.corpus;
        let truth = self.load_truth(&corpus)?;
        let (model_path, _) = self.derived(&self.config.paths.model, "model.json");
        let file = ModelFile::load(&model_path)?;
        let threshold = self
            .config
            .ml
            .threshold
            .or(file.threshold)
            .with_context(|| {
                format!(
                    "{} has no threshold; set ml.threshold",
                    model_path.display()
                )
            })?;

        let mut targets = self.holdout(&corpus, truth.as_ref())?;
        if targets.is_empty() {
            targets = (0..corpus.instances().len()).collect();
        }
        let profiles = self.extractor()?.profiles(&corpus, &targets);
        let mut clusters = disambiguate(
            &corpus,
            &targets,
            &profiles,
            &file.model,
            self.config.ml.blocking,
            &HacConfig::new(threshold),
        );
        for c in &mut clusters {
            c.sort_unstable();
        }
        clusters.sort();
        let mut rows: Vec<(usize, String)> = clusters
            .iter()
            .enumerate()
            .flat_map(|(k, members)| members.iter().map(move |&m| (m, cluster_id(k))))
            .collect();
        rows.sort();
        let ids = rows
            .iter()
            .map(|(i, c)| (corpus.instance(*i).instance_id.as_str(), c.as_str()));
        out.write(
            "clusters.tsv",
            &stamp_tsv(self.hash, &write_pairs_tsv(LABEL_HEADER, ids)),
        )?;
        out.write_json(
            "disambiguation_report.json",
            &DisambiguationReport {
                classifier: file.kind().to_string(),
                model_config_hash: file.config_hash.clone(),
                threshold,
                instances: targets.len(),
                clusters: clusters.len(),
            },
        )?;
        Ok(())
    }

    fn evaluate(&self, out: &mut OutputDir) -> Result<()> {
        let corpus = self.load_corpus()?.corpus;
        let truth = self.require_truth(&corpus, "evaluate")?;
        let mut targets = self.holdout(&corpus, Some(&truth))?;
        if targets.is_empty() {
            targets = truth
                .iter()
                .filter_map(|(id, _)| corpus.instance_index(id))
                .collect();
        }
        let target_ids: HashSet<&str> = targets
            .iter()
            .map(|&i| corpus.instance(i).instance_id.as_str())
            .collect();
        let truth = truth.restrict(|id| target_ids.contains(id));

        let mut table = Table::new(&[
            "system",
            "instances",
            "pP",
            "pR",
            "pF1",
            "predicted_pairs",
            "truth_pairs",
            "correct_pairs",
            "predicted_clusters",
            "truth_clusters",
        ]);
        let mut push = |system: &str, r: EvaluationReport| {
            table.push(vec![
                system.into(),
                r.evaluable_instances.into(),
                Cell::ratio(r.precision),
                Cell::ratio(r.recall),
                Cell::ratio(r.f1),
                r.predicted_pairs.into(),
                r.truth_pairs.into(),
                r.correct_pairs.into(),
                r.predicted_clusters.into(),
                r.truth_clusters.into(),
            ]);
        };

        // Unassigned target instances count as singletons.
        let complete = |assigned: &HashMap<String, String>| -> Vec<(String, (bool, String))> {
            let mut v: Vec<(String, (bool, String))> = target_ids
                .iter()
                .map(|id| match assigned.get(*id) {
                    Some(c) => (id.to_string(), (true, c.clone())),
                    None => (id.to_string(), (false, id.to_string())),
                })
                .collect();
            v.sort();
            v
        };

        let mut systems = 0;
        let (pred_path, explicit) = self.derived(&self.config.paths.predictions, "clusters.tsv");
        if explicit || pred_path.exists() {
            let pred: HashMap<String, String> = self
                .read_id_map(&pred_path, LABEL_HEADER)?
                .into_iter()
                .collect();
            push(
                "model",
                pairwise_metrics(
                    complete(&pred),
                    truth.iter().map(|(k, v)| (k.to_string(), v)),
                ),
            );
            systems += 1;
        }
        let (label_path, explicit) = self.derived(&self.config.paths.labels, "labels.tsv");
        if explicit || label_path.exists() {
            let labels: HashMap<String, String> = self
                .read_id_map(&label_path, LABEL_HEADER)?
                .into_iter()
                .collect();
            push(
                "labels",
                pairwise_metrics(
                    complete(&labels),
                    truth.iter().map(|(k, v)| (k.to_string(), v)),
                ),
            );
            let labeled: Vec<(&str, &str)> = labels
                .iter()
                .filter(|(id, _)| target_ids.contains(id.as_str()))
                .map(|(id, c)| (id.as_str(), c.as_str()))
                .collect();
            push("labeled_subset", pairwise_metrics(labeled, truth.iter()));
            systems += 1;
        }
        if systems == 0 {
            bail!(
                "nothing to evaluate: neither {} nor {} exists",
                pred_path.display(),
                label_path.display()
            );
        }
        out.write_table("evaluation", &table, self.format)?;
        Ok(())
    }

    fn report(&self, out: &mut OutputDir) -> Result<()> {
        let corpus = self.load_corpus()?.corpus;
        let labels = self.read_labels()?;
        let labeled: Vec<usize> = resolve_labels(&corpus, &labels)?
            .into_iter()
            .map(|(i, _)| i)
            .collect();
        let range = self.config.report.fit_range;
        let population = block_stats(
            corpus.instances().iter().map(|i| i.block_key.as_str()),
            range,
        );
        let subset = block_stats(
            labeled
                .iter()
                .map(|&i| corpus.instance(i).block_key.as_str()),
            range,
        );

        let mut sizes = Table::new(&["set", "block_size", "blocks_at_least", "ratio"]);
        for (name, stats) in [("labeled", &subset), ("population", &population)] {
            for p in &stats.cumulative {
                sizes.push(vec![
                    name.into(),
                    p.size.into(),
                    p.blocks_at_least.into(),
                    p.ratio.into(),
                ]);
            }
        }
        out.write_table("block_sizes", &sizes, self.format)?;

        if let Some(p) = &self.config.paths.tags {
            let path = self.config.resolve(p);
            let tags: HashMap<String, String> =
                self.read_id_map(&path, TAG_HEADER)?.into_iter().collect();
            let subset_ids: Vec<&str> = labeled
                .iter()
                .map(|&i| corpus.instance(i).instance_id.as_str())
                .collect();
            let all_ids: Vec<&str> = corpus
                .instances()
                .iter()
                .map(|i| i.instance_id.as_str())
                .collect();
            let report = tag_ratios(&subset_ids, &all_ids, &tags, self.config.report.top_k)?;
            let mut table = Table::new(&[
                "category",
                "labeled_ratio",
                "population_ratio",
                "abs_difference",
            ]);
            for r in report.rows {
                table.push(vec![
                    r.category.into(),
                    r.subset_ratio.into(),
                    r.population_ratio.into(),
                    r.abs_difference.into(),
                ]);
            }
            out.write_table("tag_ratios", &table, self.format)?;
        }
        out.write_json(
            "representativeness.json",
            &Representativeness {
                labeled: (&subset).into(),
                population: (&population).into(),
            },
        )?;
        Ok(())
    }
}
