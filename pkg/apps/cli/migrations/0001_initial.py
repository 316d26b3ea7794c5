# Generated by Django 5.0 on 2026-10-18 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='RunManifest',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='Created at')),
                ('updated_at', models.DateTimeField(auto_now=True, verbose_name='Updated at')),
                ('deleted_at', models.DateTimeField(blank=True, null=True, verbose_name='Deleted at')),
                ('command', models.CharField(max_length=32, verbose_name='Command')),
                ('argv', models.JSONField(default=list, verbose_name='Arguments')),
                ('exit_code', models.IntegerField(verbose_name='Exit code')),
                ('wall_time', models.FloatField(verbose_name='Wall time, s')),
                ('seed', models.CharField(blank=True, max_length=20, verbose_name='Seed')),
                ('threads', models.IntegerField(verbose_name='Threads')),
                ('run_dir', models.CharField(blank=True, max_length=255, verbose_name='Run directory')),
                ('inputs', models.JSONField(default=dict, verbose_name='Inputs')),
                ('versions', models.JSONField(default=dict, verbose_name='Versions')),
                ('outputs', models.JSONField(default=dict, verbose_name='Outputs')),
            ],
            options={
                'verbose_name': 'Run manifest',
                'verbose_name_plural': 'Run manifests',
                'ordering': ('-created_at',),
            },
        ),
    ]
