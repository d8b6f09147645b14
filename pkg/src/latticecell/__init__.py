"""Concept-lattice text categorization with a Boolean cellular rule engine.

The pipeline: preprocess documents into binary term vectors, stack them
into a formal context, build the concept lattice by divide-and-conquer
assembly, compile the lattice into a two-layer rule engine, and classify
new documents by similarity-driven activation, forward chaining, and a
majority vote over class distributions.
"""

from .backend import active_backend, available_backends, set_backend
from .classify import (MEASURES, Prediction, activate, classify,
                       parse_activation, similarity, vote)
from .compiler import (CellularModel, ClassDistribution, compile_model,
                       distribution_of, load_fixture_model, load_model,
                       model_from_dict, model_to_dict, save_model)
from .context import (Concept, FormalContext, close_objects, derive_extent,
                      derive_intent, enumerate_concepts_naive, is_closed,
                      is_subconcept, load_context_csv, save_context_csv)
from .engine import (EngineState, FactCell, RuleCell, delta_fact, delta_rule,
                     render_fact_table, render_rule_table, render_snapshot,
                     run_inference, set_facts)
from .errors import (CapacityError, CorpusError, DimensionError,
                     EmptyInputError, FormatError, LabelingError,
                     LatticeCellError, NotSplittableError)
from .evaluate import (BASELINES, ConfusionMatrix, ExperimentReport,
                       MetricsReport, PipelineConfig, baseline_knn,
                       baseline_naive_bayes, metrics, run_experiment,
                       split_corpus)
from .lattice import (ConceptLattice, appose, assemble, build_lattice,
                      find_lower_covers, find_psi, lattice_to_dot,
                      load_lattice, save_lattice, split_context)
from .textprep import (Document, DocumentVector, Vocabulary, build_context,
                       build_vocabulary, candidate_terms, default_stopwords,
                       information_gain, load_corpus, load_documents,
                       load_stopwords, remove_stopwords, select_features,
                       tokenize, vectorize)

__version__ = "0.1.0"
