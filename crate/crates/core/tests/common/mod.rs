#![allow(dead_code)]

use betagraph::seesaw::SeeSawConfig;
use betagraph::Graph;

const CORPUS: &str = include_str!("../../../../data/connected_graphs_le7.tsv");

pub struct CorpusGraph {
    pub graph: Graph,
    pub alpha: usize,
    /// Lovász number from an external conic solver.
    pub theta: f64,
}

/// All connected graphs on 1 to 7 vertices, one per isomorphism class.
pub fn corpus() -> Vec<CorpusGraph> {
    CORPUS
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.split('\t').collect();
            let n: usize = cols[0].parse().unwrap();
            let edges: Vec<(usize, usize)> = cols[1]
                .split(',')
                .filter(|e| !e.is_empty())
                .map(|e| {
                    let (a, b) = e.split_once('-').unwrap();
                    (a.parse().unwrap(), b.parse().unwrap())
                })
                .collect();
            CorpusGraph {
                graph: Graph::from_edges(n, &edges).unwrap(),
                alpha: cols[2].parse().unwrap(),
                theta: cols[3].parse().unwrap(),
            }
        })
        .collect()
}

pub fn quick_seesaw(restarts: usize) -> SeeSawConfig {
    SeeSawConfig {
        restarts,
        max_iters: 300,
        ..Default::default()
    }
}
