"""Topic co-occurrence network analytics toolkit."""

__version__ = "0.1.0"

from .community import AgreementMatrix, Partition, consensus_partition, louvain_once, modularity
from .corpus import (ArticleRecord, CanonicalizationMap, IngestResult,
                     TopicVocabulary, canonicalize, ingest, select_top_k,
                     tokenize, topic_prevalence)
from .dynamics import (MetricSeries, WindowSpec, enumerate_windows, metric_slope,
                       neighbor_trend, slopes_table, window_metric_series,
                       window_networks)
from .errors import ConfigError, ConvergenceError, DataError, TopiknetError
from .metrics import (GlobalMetrics, NodeMetrics, PathLength, betweenness,
                      char_path_length, clustering_barrat, compute_node_metrics,
                      degree_strength, global_metrics, neighbor_prevalence,
                      participation, shortest_distances)
from .months import MonthRange, month_index, month_label
from .network import TopicNetwork, build_network, phi_coefficient, phi_significance
from .smallworld import (NullEnsemble, SmallWorldResult, empirical_pvalue,
                         lattice_reference, randomize_preserving,
                         small_world_propensity, small_world_summary)
from .stats import (CorrelationResult, RegressionResult, analysis_static,
                    analysis_temporal, correlation_battery, ols_regression,
                    spearman)
from .synth import SynthSpec, TopicBlock, expected_prevalence, generate, write_corpus
