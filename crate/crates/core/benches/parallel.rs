use betagraph::bounds::parse_hamiltonian;
use betagraph::numerics::random_pure_state;
use betagraph::par::Execution;
use betagraph::pauli::PauliSumOperator;
use betagraph::represent::standard_saur;
use betagraph::seesaw::{seesaw_bilinear, Operators, SeeSawConfig};
use betagraph::Graph;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn seesaw_restarts(c: &mut Criterion) {
    let g = Graph::cycle(9).complement();
    let ops = Operators::Pauli(standard_saur(&g, None).unwrap());
    let w = vec![1.0; 9];
    let mut group = c.benchmark_group("seesaw_restarts");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SeeSawConfig {
            restarts: 16,
            max_iters: 200,
            exec,
            ..Default::default()
        };
        group.bench_function(BenchmarkId::new("anti-enneagon", name), |b| {
            b.iter(|| seesaw_bilinear(&ops, &w, &cfg).unwrap().value)
        });
    }
    group.finish();
}

fn pauli_matvec(c: &mut Criterion) {
    let terms = parse_hamiltonian(include_str!("../../../data/h14.txt")).unwrap();
    let h = PauliSumOperator::new(terms).unwrap();
    let v = random_pure_state(h.dim(), 1);
    let mut group = c.benchmark_group("pauli_matvec");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("14 qubits", name), |b| {
            b.iter(|| h.matvec_with(v.vector().as_slice(), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, seesaw_restarts, pauli_matvec);
criterion_main!(benches);
