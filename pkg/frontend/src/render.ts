// DOM builders for the three views. Rendering is strictly presentational:
// results keep the API response order (re-sorting happens server-side only)
// and score/ascore/reputation/expectation values are carried verbatim in
// data-* attributes, with display text merely trimmed for width.

import type { LabelView, Policy, SearchResult, SourceRow, Stance } from './api.js';

export function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    attrs: Record<string, string> = {},
    children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    for (const [key, value] of Object.entries(attrs)) {
        node.setAttribute(key, value);
    }
    for (const child of children) {
        node.append(child);
    }
    return node;
}

export function trim(value: number): string {
    // display-only rounding; the exact value lives in data-* attributes
    const rounded = Math.round(value * 1000) / 1000;
    return String(rounded);
}

export function renderResults(results: SearchResult[]): HTMLElement {
    const list = el('ol', { id: 'results', class: 'results' });
    if (results.length === 0) {
        list.append(el('li', { class: 'empty-state' }, ['No results.']));
        return list;
    }
    for (const result of results) {
        const labels = el('span', { class: 'result-labels' });
        for (const [label, expectation] of Object.entries(result.labels)) {
            labels.append(
                el(
                    'span',
                    { class: 'label-chip', 'data-label': label, 'data-expectation': String(expectation) },
                    [`${label}: ${trim(expectation)}`],
                ),
            );
        }
        list.append(
            el('li', { class: 'result', 'data-url': result.url }, [
                el('a', { class: 'result-title', href: result.url }, [result.title || result.url]),
                el('div', { class: 'result-url' }, [result.url]),
                el('div', { class: 'result-snippet' }, [result.snippet]),
                el('div', { class: 'result-meta' }, [
                    el('span', { class: 'score', 'data-score': String(result.score) }, [
                        `score ${trim(result.score)}`,
                    ]),
                    el('span', { class: 'ascore', 'data-ascore': String(result.ascore) }, [
                        `ascore ${trim(result.ascore)}`,
                    ]),
                    labels,
                    el('button', { class: 'annotate-button', type: 'button', 'data-url': result.url }, [
                        'labels',
                    ]),
                ]),
            ]),
        );
    }
    return list;
}

export function renderPolicyTable(policy: Policy): HTMLElement {
    const table = el('table', { id: 'policy-table' });
    table.append(
        el('caption', {}, [
            'Policy ',
            el('a', { href: '#', id: 'policy-edit-link' }, ['(edit)']),
        ]),
    );
    const body = el('tbody');
    for (const [label, stance] of Object.entries(policy)) {
        body.append(
            el('tr', { 'data-label': label }, [
                el('td', { class: 'policy-label' }, [label]),
                el('td', { class: 'policy-stance' }, [stance]),
            ]),
        );
    }
    if (Object.keys(policy).length === 0) {
        body.append(el('tr', {}, [el('td', { colspan: '2', class: 'empty-state' }, ['no labels configured'])]));
    }
    table.append(body);
    return table;
}

export interface PolicyDraftRow {
    label: string;
    stance: Stance;
}

export function renderPolicyEditor(draft: PolicyDraftRow[]): HTMLElement {
    const form = el('form', { id: 'policy-editor' });
    const rows = el('div', { class: 'policy-rows' });
    const addRow = (label: string, stance: Stance) => {
        const stanceSelect = el('select', { class: 'stance-input' }, [
            el('option', { value: 'favored' }, ['favored']),
            el('option', { value: 'disfavored' }, ['disfavored']),
        ]);
        stanceSelect.value = stance;
        const row = el('div', { class: 'policy-row' }, [
            el('input', { class: 'label-input', value: label, placeholder: 'label' }),
            stanceSelect,
            el('button', { type: 'button', class: 'remove-row' }, ['✕']),
        ]);
        (row.querySelector('.remove-row') as HTMLButtonElement).addEventListener('click', () => row.remove());
        rows.append(row);
    };
    for (const { label, stance } of draft) addRow(label, stance);
    const addButton = el('button', { type: 'button', id: 'policy-add-row' }, ['add label']);
    addButton.addEventListener('click', () => addRow('', 'favored'));
    form.append(
        rows,
        addButton,
        el('button', { type: 'submit', id: 'policy-save' }, ['save']),
        el('button', { type: 'button', id: 'policy-cancel' }, ['cancel']),
        el('div', { class: 'form-error', role: 'alert' }),
    );
    return form;
}

export function readPolicyDraft(editor: HTMLElement): Policy {
    const draft: Policy = {};
    for (const row of editor.querySelectorAll('.policy-row')) {
        const label = (row.querySelector('.label-input') as HTMLInputElement).value.trim();
        const stance = (row.querySelector('.stance-input') as HTMLSelectElement).value as Stance;
        if (label) draft[label] = stance;
    }
    return draft;
}

export function renderSources(sources: SourceRow[]): HTMLElement {
    const table = el('table', { id: 'sources-table' });
    table.append(el('caption', {}, ['Label sources']));
    table.append(
        el('thead', {}, [
            el('tr', {}, [el('th', {}, ['source']), el('th', {}, ['tier']), el('th', {}, ['reputation'])]),
        ]),
    );
    const body = el('tbody');
    for (const source of sources) {
        const title = source.lastError ? `last fetch failed: ${source.lastError}` : '';
        const reputation =
            source.tier > 0 && source.reputation === 0
                ? `${trim(source.reputation)} (unrated)`
                : trim(source.reputation);
        body.append(
            el('tr', { 'data-source': source.id, title }, [
                el('td', { class: 'source-id' }, [source.id + (source.lastError ? ' ⚠' : '')]),
                el('td', { class: 'source-tier' }, [String(source.tier)]),
                el('td', { class: 'source-reputation', 'data-reputation': String(source.reputation) }, [
                    reputation,
                ]),
            ]),
        );
    }
    table.append(body);
    return table;
}

export function renderSidebar(view: LabelView): HTMLElement {
    const records = el('ul', { class: 'sidebar-records' });
    for (const assertion of view.assertions) {
        records.append(
            el('li', { 'data-source': assertion.source, 'data-label': assertion.label }, [
                `${assertion.source} (tier ${assertion.tier}): ${assertion.label} = ${assertion.value}`,
            ]),
        );
    }
    if (view.assertions.length === 0) {
        records.append(el('li', { class: 'empty-state' }, ['no label records for this page']));
    }
    const expectations = el('ul', { class: 'sidebar-expectations' });
    for (const [label, value] of Object.entries(view.expectations)) {
        expectations.append(
            el('li', { 'data-label': label, 'data-expectation': String(value) }, [
                `${label}: ${trim(value)}`,
            ]),
        );
    }

    // pages may refuse framing; the always-present link and the form are the
    // contract, the embedded view is best effort
    const form = el('form', { id: 'assertion-form' }, [
        el('label', {}, ['URL ', el('input', { id: 'assertion-url', value: view.url })]),
        el('label', {}, ['Label ', el('input', { id: 'assertion-label', placeholder: 'e.g. haspopup' })]),
        el('label', {}, [
            'Value ',
            el('select', { id: 'assertion-value' }, [
                el('option', { value: '1' }, ['applies']),
                el('option', { value: '-1' }, ['does not apply']),
            ]),
        ]),
        el('button', { type: 'submit' }, ['assert']),
        el('div', { class: 'form-error', role: 'alert' }),
    ]);

    return el('div', { class: 'sidebar-content', 'data-url': view.url }, [
        el('div', { class: 'sidebar-page' }, [
            el('iframe', { class: 'sidebar-frame', src: view.url, title: 'target page' }),
            el('a', { class: 'sidebar-open-link', href: view.url, target: '_blank' }, [
                'open in new window',
            ]),
        ]),
        el('div', { class: 'sidebar-annotations' }, [
            el('h3', {}, ['Label records']),
            records,
            el('h3', {}, ['Expectations']),
            expectations,
            el('h3', {}, ['Your assertion']),
            form,
            el('button', { type: 'button', id: 'sidebar-close' }, ['close']),
        ]),
    ]);
}
