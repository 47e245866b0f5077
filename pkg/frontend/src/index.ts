export {
  ALGORITHMS,
  deploymentClass,
  lookupAlgorithm,
  suiteLevel,
  type AlgorithmInfo,
  type DeploymentClass,
} from "./algorithms.js";
export {
  loadResults,
  loadResultsFromPaths,
  type CsvInput,
  type FileTags,
} from "./load.js";
export {
  applyFilter,
  columnMinima,
  minimaSummary,
  renderCharts,
  renderSvg,
  METRIC_LABELS,
  type ChartFile,
  type ChartSpec,
  type Grouping,
  type ReportOutput,
  type RowFilter,
  type SortOrder,
} from "./charts.js";
export {
  EmptySelection,
  METRIC_COLUMNS,
  SchemaMismatch,
  TRANSPORTS,
  rowKey,
  type MetricColumn,
  type ResultRow,
  type ResultsTable,
  type Transport,
} from "./schema.js";
