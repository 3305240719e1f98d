/** Tool version recorded in provenance sidecars. */
export const TOOL_VERSION = "0.1.0";
