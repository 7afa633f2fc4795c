"""Forms validating the options of the management commands."""
from django import forms
from django.core.exceptions import ValidationError


def validate_positive(value):
    """Reject zero and negative numbers."""
    if value <= 0:
        raise ValidationError('Ensure this value is greater than 0.')


class TrainForm(forms.Form):
    """Options of the train command."""

    FORMAT_CHOICES = (
        ('text', 'One document per line'),
        ('bow', 'UCI bag of words'),
    )

    input = forms.CharField()
    format = forms.ChoiceField(choices=FORMAT_CHOICES)
    vocab = forms.CharField(required=False)
    topics = forms.IntegerField(min_value=2)
    alpha = forms.FloatField(validators=[validate_positive])
    beta = forms.FloatField(validators=[validate_positive])
    epochs = forms.IntegerField(min_value=1)
    tol = forms.FloatField(validators=[validate_positive])
    seed = forms.IntegerField()
    min_count = forms.IntegerField(min_value=1)
    threads = forms.IntegerField(min_value=1)
    model_out = forms.CharField()

    def clean(self):
        """A bag-of-words input needs its vocabulary file."""
        cleaned_data = super().clean()
        if cleaned_data.get('format') == 'bow' and not cleaned_data.get('vocab'):
            self.add_error('vocab', 'A vocabulary file is required for bag-of-words input.')
        return cleaned_data


class TopicsForm(forms.Form):
    """Options of the topics command."""

    model = forms.CharField()
    n = forms.IntegerField(min_value=1)


class InferForm(forms.Form):
    """Options of the infer command."""

    model = forms.CharField()
    input = forms.CharField()
    epochs = forms.IntegerField(min_value=1)
    tol = forms.FloatField(validators=[validate_positive])


class SeedForm(forms.Form):
    """Options of the seed command."""

    out_dir = forms.CharField()
    topics = forms.IntegerField(min_value=2)
    vocab_size = forms.IntegerField(min_value=2)
    documents = forms.IntegerField(min_value=1)
    length = forms.IntegerField(min_value=1)
    alpha = forms.FloatField(validators=[validate_positive])
    beta = forms.FloatField(validators=[validate_positive])
    seed = forms.IntegerField()
    separable = forms.BooleanField(required=False)

    def clean(self):
        """There cannot be more topics than terms."""
        cleaned_data = super().clean()
        topics = cleaned_data.get('topics')
        vocab_size = cleaned_data.get('vocab_size')
        if topics and vocab_size and vocab_size < topics:
            self.add_error('vocab_size', 'The vocabulary must have at least one term per topic.')
        return cleaned_data


def errors_as_text(form):
    """Flatten a bound form's errors into one line per field."""
    return '; '.join(
        f'{field}: {" ".join(messages)}' for field, messages in form.errors.items()
    )
