#!/usr/bin/env node
// Regenerates fixtures/exported/ at the repository root: a deterministic
// scene image, its concept-mask manifest, and a toy model bundle.  Run
// `npm run build` first; output is byte-stable across runs.

const path = require("node:path");
const { exportMasks, exportModel } = require("../dist/jobs");
const { writePng } = require("../dist/png");

const outRoot = path.resolve(__dirname, "..", "..", "fixtures", "exported");

function buildScene() {
  const height = 64;
  const width = 64;
  const data = new Uint8Array(height * width * 3);
  for (let i = 0; i < height * width; i++) {
    data.set([190, 190, 190], i * 3);
  }
  const paint = (r0, r1, c0, c1, rgb) => {
    for (let r = r0; r < r1; r++) {
      for (let c = c0; c < c1; c++) {
        data.set(rgb, (r * width + c) * 3);
      }
    }
  };
  paint(4, 28, 6, 30, [230, 40, 40]);
  paint(36, 60, 8, 26, [40, 40, 230]);
  paint(10, 26, 40, 58, [40, 200, 90]);
  return { height, width, data };
}

const scenePath = path.join(outRoot, "scene.png");
writePng(scenePath, buildScene());

const masks = exportMasks({
  imagePath: scenePath,
  outDir: outRoot,
  segmenter: "color",
  quantStep: 32,
  minArea: 10,
});
console.log(`wrote ${masks.manifest.concepts.length} masks to ${masks.manifestPath}`);

const model = exportModel({
  modelName: "toy:7,4,5",
  outDir: path.join(outRoot, "bundle"),
  probes: 10,
});
console.log(`wrote bundle (m=${model.model.m}) to ${model.bundleDir}`);
