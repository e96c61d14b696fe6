import { api } from "./api";
import { createWorkbench } from "./app";

const root = document.getElementById("app");
if (root) createWorkbench(root, api);
