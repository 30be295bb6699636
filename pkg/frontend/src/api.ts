/** Typed client for the debug service JSON API. The UI never computes
 * formula semantics itself; every verdict and series comes from here. */

export interface AstNode {
  id: number;
  kind: string;
  label: string;
  text: string;
  children: number[];
  atom?: { name: string; args: (string | number)[] };
  interval?: [number, number | null];
}

export interface ParseOk {
  ast: AstNode[];
  pretty: string;
  errors: [];
}

export interface ParseDiagnostic {
  message: string;
  position: number;
  kind?: string;
}

export interface EvaluateResponse {
  verdict: boolean;
  times: number[];
  robustness_series: number[];
  subformula_series: Record<string, number[]>;
  ast: AstNode[];
}

export interface VehicleJson {
  length: number;
  width: number;
  present: boolean[];
  channels: Record<string, number[]>;
}

export interface TraceJson {
  times: number[];
  vehicles: Record<string, VehicleJson>;
}

export interface ExemplifySuccess {
  ok: true;
  trace: TraceJson;
  robustness: number;
  iterations: number;
  formula: string;
}

export interface ExemplifyFailure {
  ok: false;
  bestRobustness: number;
  message: string;
}

export type ExemplifyOutcome = ExemplifySuccess | ExemplifyFailure;

export interface AtomSignature {
  name: string;
  kinds: string[];
  macro: boolean;
  doc: string;
}

export interface CatalogEntry {
  index: number;
  text: string;
}

export interface UploadInfo {
  name: string;
  vehicles: string[];
  samples: number;
  domain: [number, number];
}

export interface ExemplifyRequest {
  formula: string;
  exclude?: string;
  template?: Record<string, unknown>;
  budget?: number;
  seed?: number;
  params?: Record<string, number>;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ParseFailed extends Error {
  constructor(readonly diagnostic: ParseDiagnostic) {
    super(diagnostic.message);
  }
}

type Fetch = typeof fetch;

export class DebugServiceClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: Fetch = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail = (body as { detail?: unknown }).detail;
      if (response.status === 400 && detail && typeof detail === "object"
          && "position" in (detail as object)) {
        throw new ParseFailed(detail as ParseDiagnostic);
      }
      const message = typeof detail === "string"
        ? detail : JSON.stringify(detail ?? body);
      throw new ApiError(response.status, message);
    }
    return body;
  }

  health(): Promise<{ status: string }> {
    return this.request("/health") as Promise<{ status: string }>;
  }

  async atoms(): Promise<AtomSignature[]> {
    const body = await this.request("/atoms") as { atoms: AtomSignature[] };
    return body.atoms;
  }

  async catalog(variant: string): Promise<CatalogEntry[]> {
    const body = await this.request(
      `/catalog?variant=${encodeURIComponent(variant)}`,
    ) as { scenarios: CatalogEntry[] };
    return body.scenarios;
  }

  async createSession(): Promise<string> {
    const body = await this.request("/sessions", { method: "POST" }) as
      { session: string };
    return body.session;
  }

  uploadTrace(session: string, name: string, csv: string): Promise<UploadInfo> {
    return this.request(`/sessions/${session}/traces`, {
      method: "POST",
      body: JSON.stringify({ name, csv }),
    }) as Promise<UploadInfo>;
  }

  parse(text: string): Promise<ParseOk> {
    return this.request("/parse", {
      method: "POST",
      body: JSON.stringify({ text }),
    }) as Promise<ParseOk>;
  }

  evaluate(req: {
    session: string;
    trace: string;
    formula: string;
    bindings?: Record<string, string>;
    mode?: string;
    params?: Record<string, number>;
  }): Promise<EvaluateResponse> {
    return this.request("/evaluate", {
      method: "POST",
      body: JSON.stringify(req),
    }) as Promise<EvaluateResponse>;
  }

  async exemplify(req: ExemplifyRequest): Promise<ExemplifyOutcome> {
    try {
      const body = await this.request("/exemplify", {
        method: "POST",
        body: JSON.stringify(req),
      }) as Omit<ExemplifySuccess, "ok">;
      return { ok: true, ...body };
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        const detail = JSON.parse(error.message) as {
          best_robustness: number; failure: string;
        };
        return {
          ok: false,
          bestRobustness: detail.best_robustness,
          message: detail.failure,
        };
      }
      throw error;
    }
  }
}

/** Serialize an exemplified trace into the per-pair CSV the service accepts,
 * so a synthesized signal can be loaded back into the evaluate panel. */
export function traceToCsv(trace: TraceJson): string {
  const lines = ["t,vehicle,length,width,s,v,a,d,theta"];
  for (const vid of Object.keys(trace.vehicles).sort()) {
    const vehicle = trace.vehicles[vid];
    trace.times.forEach((t, k) => {
      if (!vehicle.present[k]) return;
      const row = [t, vid, vehicle.length, vehicle.width,
        vehicle.channels.s[k], vehicle.channels.v[k], vehicle.channels.a[k],
        vehicle.channels.d[k], vehicle.channels.theta[k]];
      lines.push(row.join(","));
    });
  }
  return lines.join("\n") + "\n";
}
