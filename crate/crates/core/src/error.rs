use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("observation set of node {} does not contain the node itself", node + 1)]
    MissingSelfObservation { node: usize },
    #[error("node {} outside 1..={num_nodes}", node + 1)]
    NodeOutOfRange { node: usize, num_nodes: usize },
    #[error("{op}: K={num_nodes} exceeds the exact-search cap of {cap}; use a bound instead")]
    CapExceeded {
        op: &'static str,
        num_nodes: usize,
        cap: usize,
    },
    #[error("Erdős–Rényi density {0} outside [0, 1]")]
    InvalidDensity(f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("loss {loss} for action {} outside [0, 1]", action + 1)]
    LossOutOfRange { action: usize, loss: f64 },
    #[error("observed actions {observed:?} differ from the observation set {expected:?} of the played action")]
    ObservedSetMismatch {
        observed: Vec<usize>,
        expected: Vec<usize>,
    },
    #[error("action {} outside 1..={num_actions}", action + 1)]
    ActionOutOfRange { action: usize, num_actions: usize },
    #[error("graph has {graph} nodes but the policy has {policy} actions")]
    SizeMismatch { graph: usize, policy: usize },
    #[error("learning rate {0} outside [0, 1]")]
    InvalidEta(f64),
    #[error("exploration rate {0} outside (0, 1]")]
    InvalidGamma(f64),
    #[error("expected {expected} exploration rates, got {got}")]
    GammaCount { expected: usize, got: usize },
    #[error("supplied node set is not a dominating set of the round's graph")]
    NotDominating,
    #[error("update for bucket {got} does not match the bucket {expected} chosen this round")]
    BucketMismatch { expected: usize, got: usize },
    #[error("tuning needs at least two actions, got {0}")]
    TooFewActions(usize),
    #[error("tuning input {name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("policy needs at least one action")]
    NoActions,
}

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("scripted loss table exhausted at round {round} ({rows} rows)")]
    LossTableExhausted { round: usize, rows: usize },
    #[error("scripted graph list exhausted at round {round} ({len} graphs)")]
    GraphListExhausted { round: usize, len: usize },
    #[error("round {round}: loss {loss} for action {} outside [0, 1]", action + 1)]
    LossOutOfRange { round: usize, action: usize, loss: f64 },
    #[error("round {round}: expected {expected} losses, got {got}")]
    WrongWidth { round: usize, expected: usize, got: usize },
    #[error("round {round}: graph has {got} nodes, expected {expected}")]
    GraphSize { round: usize, expected: usize, got: usize },
    #[error("history has {got} actions at round {round}; expected {}", round - 1)]
    HistoryLength { round: usize, got: usize },
    #[error("mean {0} outside [0, 1]")]
    InvalidMean(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("loss table: {0}")]
    Csv(#[from] csv::Error),
    #[error("loss table line {line}: {msg}")]
    Table { line: usize, msg: String },
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("Exp3-DOM needs the informed setting: the graph must be disclosed before play")]
    DomRequiresInformed,
    #[error("loss process has {losses} actions, graph process {graphs}, policy {policy}")]
    ActionCount {
        losses: usize,
        graphs: usize,
        policy: usize,
    },
    #[error("regret bound overlay not available: {0}")]
    UnsupportedBound(String),
    #[error("repetitions must be at least 1")]
    NoRepetitions,
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(String),
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}
