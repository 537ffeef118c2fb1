//! Markdown tables for a finished report. Nothing here recomputes results.

use std::fmt::Write;

use toplab::labeler::{aggregate, LabelResult, ModelKind, ModelReport, TopicSummary};

use crate::pipeline::Report;

fn row(out: &mut String, cells: &[String]) {
    let _ = writeln!(out, "| {} |", cells.join(" | "));
}

fn header(out: &mut String, title: &str, cells: &[&str]) {
    let _ = writeln!(out, "### {title}\n");
    let _ = writeln!(out, "| {} |", cells.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(cells.len()));
}

fn words(summary: &TopicSummary) -> String {
    summary
        .top_words
        .iter()
        .map(|w| w.word.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

fn label_row(out: &mut String, r: &LabelResult) {
    row(
        out,
        &[
            r.summary.doc_set_id.clone(),
            format!("{} {}", r.summary.model_kind.unit(), r.summary.index),
            words(&r.summary),
            r.candidates.top_weighted.clone(),
            r.candidates.labels().collect::<Vec<_>>().join(", "),
            r.label.clone(),
        ],
    );
}

fn label_table(out: &mut String, report: &ModelReport) {
    let kind = report.model_kind;
    header(
        out,
        &format!("Labels with {kind}"),
        &[
            "Document",
            kind.unit(),
            "Words",
            "Top weighted word",
            "Candidate labels",
            "Label",
        ],
    );
    let mut rows: Vec<(&str, usize, Option<&LabelResult>, &TopicSummary)> = Vec::new();
    for doc in &report.per_document {
        for r in &doc.results {
            rows.push((&r.summary.doc_set_id, r.summary.index, Some(r), &r.summary));
        }
    }
    for u in &report.unlabeled {
        rows.push((&u.summary.doc_set_id, u.summary.index, None, &u.summary));
    }
    rows.sort_by(|a, b| a.0.cmp(b.0).then(a.1.cmp(&b.1)));
    for (_, _, result, summary) in rows {
        match result {
            Some(r) => label_row(out, r),
            None => row(
                out,
                &[
                    summary.doc_set_id.clone(),
                    format!("{} {}", kind.unit(), summary.index),
                    words(summary),
                    summary.top_weighted.clone().unwrap_or_else(|| "-".into()),
                    "-".into(),
                    "-".into(),
                ],
            ),
        }
    }
    out.push('\n');
}

fn wup_table(out: &mut String, report: &ModelReport) {
    header(
        out,
        &format!("WUP similarity with {}", report.model_kind),
        &[
            "Document",
            "Top weighted word",
            "Label",
            "WUP similarity",
            "Average WUP",
        ],
    );
    for doc in &report.per_document {
        for (i, r) in doc.results.iter().enumerate() {
            let avg = if i == 0 {
                format!("{:.2}", doc.avg_wup)
            } else {
                String::new()
            };
            row(
                out,
                &[
                    doc.doc_set_id.clone(),
                    r.candidates.top_weighted.clone(),
                    r.label.clone(),
                    format!("{:.2}", r.wup_score),
                    avg,
                ],
            );
        }
    }
    out.push('\n');
}

fn comparison_table(out: &mut String, report: &Report) {
    let mut ids: Vec<&str> = report.documents.iter().map(|d| d.id.as_str()).collect();
    if ids.is_empty() {
        for m in &report.models {
            for d in &m.per_document {
                if !ids.contains(&d.doc_set_id.as_str()) {
                    ids.push(&d.doc_set_id);
                }
            }
        }
    }
    let mut cells = vec!["Model"];
    cells.extend(ids.iter().copied());
    cells.push("Total average");
    header(out, "WUP similarity by model", &cells);
    for m in &report.models {
        let mut line = vec![m.model_kind.to_string()];
        for id in &ids {
            line.push(
                m.per_document
                    .iter()
                    .find(|d| d.doc_set_id == *id)
                    .map_or_else(|| "-".into(), |d| format!("{:.2}", d.avg_wup)),
            );
        }
        line.push(
            m.total_avg
                .map_or_else(|| "-".into(), |t| format!("{t:.2}")),
        );
        row(out, &line);
    }
}

/// Label tables and WUP tables per model, then the model comparison.
pub fn render_tables(report: &Report) -> String {
    let mut out = String::new();
    let placeholders: Vec<ModelReport>;
    let models: Vec<&ModelReport> = if report.models.is_empty() {
        placeholders = [ModelKind::Lda, ModelKind::KMeans]
            .into_iter()
            .map(|kind| aggregate(kind, Vec::new(), Vec::new()))
            .collect();
        placeholders.iter().collect()
    } else {
        [ModelKind::Lda, ModelKind::KMeans]
            .into_iter()
            .filter_map(|kind| report.model(kind))
            .collect()
    };
    for m in &models {
        label_table(&mut out, m);
    }
    for m in &models {
        wup_table(&mut out, m);
    }
    comparison_table(&mut out, report);
    out
}
