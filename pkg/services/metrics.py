from prometheus_client import CollectorRegistry, Counter, Histogram, Gauge, generate_latest

registry = CollectorRegistry()

# Metrics
eliminated_pairs_total = Counter(
    'knotlens_eliminated_pairs_total',
    'Generator pairs cancelled by Gaussian elimination',
    ['stage'],
    registry=registry
)

slices_built_total = Counter(
    'knotlens_slices_built_total',
    'Integer slices expanded from polynomial complexes',
    registry=registry
)

smith_decompositions_total = Counter(
    'knotlens_smith_decompositions_total',
    'Smith normal form decompositions computed',
    registry=registry
)

skein_subproblems_total = Counter(
    'knotlens_skein_subproblems_total',
    'Braid words evaluated by the skein recursion',
    registry=registry
)

verification_checks_total = Counter(
    'knotlens_verification_checks_total',
    'Verification checks by outcome',
    ['check', 'result'],
    registry=registry
)

page_seconds = Histogram(
    'knotlens_page_seconds',
    'Time spent computing one spectral page of one Q-class',
    buckets=[0.01, 0.1, 0.5, 1.0, 5.0, 30.0, 120.0],
    registry=registry
)

generators_gauge = Gauge(
    'knotlens_complex_generators',
    'Generators in the most recently assembled complex',
    registry=registry
)

def metrics_text() -> str:
    """Render the registry in the Prometheus exposition format"""
    return generate_latest(registry).decode("utf-8")
