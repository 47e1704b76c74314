use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("not associative at ({0}, {1}, {2})")]
    NotAssociative(u16, u16, u16),
    #[error("order {order} is not a power of {prime}")]
    NotPPower { order: usize, prime: u32 },
    #[error("identity/inverse axioms fail: {0}")]
    BadIdentity(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("bad homomorphism: {0}")]
    BadHom(String),
    #[error("bad permutation: {0}")]
    BadPermutation(String),
}

#[derive(Debug, Error)]
pub enum WordError {
    #[error("word is not freely reduced")]
    UnreducedWord,
    #[error("trivial word where a nontrivial one is required")]
    TrivialWord,
    #[error("trivial subgroup where a nontrivial one is required")]
    TrivialSubgroup,
    #[error("generator index {0} out of range for rank {1}")]
    BadGenerator(usize, usize),
    #[error("cannot parse word: {0}")]
    Parse(String),
}

#[derive(Debug, Error)]
pub enum GogError {
    #[error("underlying graph is disconnected")]
    Disconnected,
    #[error("attachment of edge '{edge}' at end {end} is not injective: {reason}")]
    NonInjectiveAttachment { edge: String, end: usize, reason: String },
    #[error("prime mismatch: {0}")]
    PrimeMismatch(String),
    #[error("edge '{edge}' attachment incompatible with its groups: {reason}")]
    BadAttachment { edge: String, end: usize, reason: String },
    #[error("not a spanning tree")]
    NotSpanningTree,
    #[error("subgraph is not connected")]
    NotConnected,
    #[error("edge group of '{edge}' is not elliptic in the refinement: {reason}")]
    EdgeGroupNotElliptic { edge: String, reason: String },
    #[error("no vertex named '{0}'")]
    NoSuchVertex(String),
    #[error("no edge named '{0}'")]
    NoSuchEdge(String),
    #[error("group error: {0}")]
    Group(#[from] GroupError),
    #[error("word error: {0}")]
    Word(#[from] WordError),
    #[error("edge '{0}' is not fictitious")]
    NotFictitious(String),
    #[error("bad expansion: {0}")]
    BadExpansion(String),
    #[error("refinement rejected: {0}")]
    BadRefinement(String),
}

#[derive(Debug, Error)]
pub enum BallError {
    #[error("cell budget exceeded (cap {cap})")]
    BudgetExceeded { cap: usize },
    #[error("vertex not in ball: {0}")]
    NotInBall(String),
    #[error("coset test unsupported in declared scope: {0}")]
    UnsupportedCosetTest(String),
    #[error("subgroup is not finite (closure exceeded {cap} elements)")]
    NotFinite { cap: usize },
    #[error("word error: {0}")]
    Word(#[from] WordError),
    #[error("graph error: {0}")]
    Gog(#[from] GogError),
}

#[derive(Debug, Error)]
pub enum CylinderError {
    #[error("relation is not admissible")]
    NotAdmissible,
    #[error("relation unsupported in shipped scope: {0}")]
    UnsupportedRelation(String),
    #[error("conjugacy of associated subgroups undecided within budget")]
    ConjugacyUndecided,
    #[error("graph must be a one-edge amalgam")]
    NotOneEdge,
    #[error("rigidity flags must both be set for the splitting shape")]
    NotRigid,
    #[error("graph must be reduced, found fictitious edge '{0}'")]
    NotReducedInput(String),
    #[error("graph error: {0}")]
    Gog(#[from] GogError),
    #[error("ball error: {0}")]
    Ball(#[from] BallError),
}

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error("edge word is trivial")]
    TrivialEdgeWord,
    #[error("underlying graph is not a star")]
    NotStar,
    #[error("vertex group is not free: {0}")]
    NonFreeVertex(String),
    #[error("underlying graph is not a tree")]
    NotTree,
    #[error("graph must have exactly one vertex and one loop")]
    NotOneLoop,
    #[error("no vertex admits the relative splitting: {0}")]
    NoSuchVertex(String),
    #[error("word error: {0}")]
    Word(#[from] WordError),
    #[error("graph error: {0}")]
    Gog(#[from] GogError),
}

#[derive(Debug, Error)]
pub enum JsjError {
    #[error("graph is not reduced")]
    NotReduced,
    #[error("vertex group '{0}' is infinite")]
    InfiniteVertexGroup(String),
    #[error("no common generating alphabet between the two graphs: {0}")]
    IncompatiblePresentations(String),
    #[error("graph error: {0}")]
    Gog(#[from] GogError),
    #[error("ball error: {0}")]
    Ball(#[from] BallError),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Gog(#[from] GogError),
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error(transparent)]
    Cylinder(#[from] CylinderError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Jsj(#[from] JsjError),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
