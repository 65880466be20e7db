import { delayChart } from "./chart.js";
import { runChartTool } from "./cli.js";

process.exit(runChartTool("delay", process.argv.slice(2), delayChart));
