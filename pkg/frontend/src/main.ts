import { mount } from "./app.js";

declare global {
  interface Window {
    DISTURBMON_SERVICE?: string;
  }
}

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("service")
  ?? window.DISTURBMON_SERVICE
  ?? "http://127.0.0.1:8321";

mount(document, baseUrl);
