// Application shell: owns view state, wires DOM events to API calls, and
// re-renders. Handlers stash their promise on `pending` so scripted tests
// can await the work an event kicked off.

import { ApiError } from './api.js';
import type { Api } from './api.js';
import type { LabelView, Policy, SearchResponse } from './api.js';
import {
    el,
    readPolicyDraft,
    renderPolicyEditor,
    renderPolicyTable,
    renderResults,
    renderSidebar,
    renderSources,
} from './render.js';

export interface ViewState {
    query: string;
    response: SearchResponse | null;
    editingPolicy: boolean;
    sidebar: { url: string; view: LabelView } | null;
}

export class App {
    state: ViewState = { query: '', response: null, editingPolicy: false, sidebar: null };
    pending: Promise<void> = Promise.resolve();

    constructor(
        private root: HTMLElement,
        private api: Api,
    ) {
        this.root.innerHTML = '';
        this.root.append(
            el('header', {}, [
                el('h1', {}, ['PURESearch']),
                el('form', { id: 'search-form' }, [
                    el('input', { id: 'search-input', type: 'search', placeholder: 'search…' }),
                    el('button', { type: 'submit' }, ['search']),
                ]),
                el('div', { id: 'error-banner', class: 'error-banner', hidden: '' }),
            ]),
            el('main', {}, [
                el('section', { id: 'results-pane' }, [
                    el('p', { class: 'empty-state' }, ['Type a query to search.']),
                ]),
                el('aside', { id: 'rail' }, [el('div', { id: 'policy-pane' }), el('div', { id: 'sources-pane' })]),
            ]),
            el('aside', { id: 'sidebar', hidden: '' }),
        );
        this.wireEvents();
    }

    // -- event wiring ----------------------------------------------------

    private wireEvents(): void {
        const searchForm = this.query<HTMLFormElement>('#search-form');
        searchForm.addEventListener('submit', (event) => {
            event.preventDefault();
            const query = this.query<HTMLInputElement>('#search-input').value;
            this.pending = this.search(query);
        });

        this.query('#results-pane').addEventListener('click', (event) => {
            const target = event.target as HTMLElement;
            const button = target.closest('.annotate-button') as HTMLElement | null;
            if (button) {
                this.pending = this.openSidebar(button.dataset.url ?? '');
            }
        });

        this.query('#policy-pane').addEventListener('click', (event) => {
            const target = event.target as HTMLElement;
            if (target.id === 'policy-edit-link') {
                event.preventDefault();
                this.startPolicyEdit();
            } else if (target.id === 'policy-cancel') {
                this.renderPolicy(this.currentPolicy());
            }
        });
        this.query('#policy-pane').addEventListener('submit', (event) => {
            event.preventDefault();
            const editor = this.root.querySelector('#policy-editor');
            if (editor) this.pending = this.savePolicy(readPolicyDraft(editor as HTMLElement));
        });

        const sidebar = this.query('#sidebar');
        sidebar.addEventListener('submit', (event) => {
            event.preventDefault();
            this.pending = this.submitAssertion();
        });
        sidebar.addEventListener('click', (event) => {
            if ((event.target as HTMLElement).id === 'sidebar-close') this.closeSidebar();
        });
    }

    // -- actions -----------------------------------------------------------

    async init(): Promise<void> {
        try {
            const [policy, sources] = await Promise.all([this.api.getPolicy(), this.api.getSources()]);
            this.renderPolicy(policy);
            this.replace('#sources-pane', renderSources(sources));
            this.hideError();
        } catch (error) {
            this.showError(error);
        }
    }

    async search(query: string): Promise<void> {
        if (!query.trim()) return;
        this.state.query = query;
        try {
            const response = await this.api.search(query);
            this.state.response = response;
            // render in API order; the client never re-sorts or recomputes
            this.replace('#results-pane', renderResults(response.results));
            this.renderPolicy(response.policy);
            this.replace('#sources-pane', renderSources(response.sources));
            this.hideError();
        } catch (error) {
            this.showError(error); // prior results stay on screen
        }
    }

    async openSidebar(url: string): Promise<void> {
        try {
            const view = await this.api.getLabels(url);
            this.state.sidebar = { url: view.url, view };
            const sidebar = this.query('#sidebar');
            sidebar.innerHTML = '';
            sidebar.append(renderSidebar(view));
            sidebar.removeAttribute('hidden');
            this.hideError();
        } catch (error) {
            this.showError(error);
        }
    }

    closeSidebar(): void {
        this.state.sidebar = null;
        const sidebar = this.query('#sidebar');
        sidebar.setAttribute('hidden', '');
        sidebar.innerHTML = '';
    }

    async submitAssertion(): Promise<void> {
        const url = this.query<HTMLInputElement>('#assertion-url').value;
        const label = this.query<HTMLInputElement>('#assertion-label').value.trim();
        const value = this.query<HTMLSelectElement>('#assertion-value').value === '1' ? 1 : -1;
        const errorBox = this.query('#assertion-form .form-error');
        errorBox.textContent = '';
        try {
            await this.api.postLabel(url, label, value);
        } catch (error) {
            // entry stays in the form for retry
            errorBox.textContent = error instanceof Error ? error.message : String(error);
            return;
        }
        await this.openSidebar(url); // refreshed view shows the assertion as ground truth
    }

    startPolicyEdit(): void {
        this.state.editingPolicy = true;
        const draft = Object.entries(this.currentPolicy()).map(([label, stance]) => ({ label, stance }));
        this.replace('#policy-pane', renderPolicyEditor(draft));
    }

    async savePolicy(draft: Policy): Promise<void> {
        const errorBox = this.root.querySelector('#policy-editor .form-error');
        try {
            const saved = await this.api.putPolicy(draft);
            this.renderPolicy(saved);
            if (this.state.query) await this.search(this.state.query); // show re-ranking immediately
        } catch (error) {
            if (errorBox) errorBox.textContent = error instanceof Error ? error.message : String(error);
        }
    }

    // -- helpers -----------------------------------------------------------

    private currentPolicy(): Policy {
        return this.lastPolicy; // kept fresh by renderPolicy on init/search/save
    }

    private lastPolicy: Policy = {};

    private renderPolicy(policy: Policy): void {
        this.lastPolicy = policy;
        this.state.editingPolicy = false;
        this.replace('#policy-pane', renderPolicyTable(policy));
    }

    private replace(selector: string, node: HTMLElement): void {
        const pane = this.query(selector);
        pane.innerHTML = '';
        pane.append(node);
    }

    private query<T extends Element = HTMLElement>(selector: string): T {
        const node = this.root.querySelector(selector);
        if (!node) throw new Error(`missing element: ${selector}`);
        return node as T;
    }

    private showError(error: unknown): void {
        const banner = this.query('#error-banner');
        const prefix = error instanceof ApiError ? `service error (${error.status})` : 'error';
        banner.textContent = `${prefix}: ${error instanceof Error ? error.message : String(error)}`;
        banner.removeAttribute('hidden');
    }

    private hideError(): void {
        this.query('#error-banner').setAttribute('hidden', '');
    }
}
