import { ApiClient } from './api.js';
import { initApp } from './main.js';

// Same-origin service by default; ?service=http://host:port points elsewhere
// (the service must then be reachable from the page's origin).
const params = new URLSearchParams(window.location.search);
initApp(document, new ApiClient(params.get('service') ?? ''));
