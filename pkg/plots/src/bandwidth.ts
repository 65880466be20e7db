import { bandwidthChart } from "./chart.js";
import { runChartTool } from "./cli.js";

process.exit(runChartTool("bandwidth", process.argv.slice(2), bandwidthChart));
